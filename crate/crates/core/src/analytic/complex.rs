//! Multiprecision complex numbers over MPFR floats.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use rug::Float;

use crate::exact::rational::BigRat;

#[derive(Clone, Debug, PartialEq)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

pub fn float_from_bigint(prec: u32, n: &BigInt) -> Float {
    Float::with_val(prec, Float::parse(n.to_string()).expect("decimal integer"))
}

pub fn float_from_rat(prec: u32, r: &BigRat) -> Float {
    float_from_bigint(prec, r.numer()) / float_from_bigint(prec, r.denom())
}

/// The exact rational value of a finite float.
pub fn float_to_rat(x: &Float) -> BigRat {
    let (neg, digits, exp) = x.to_sign_string_exp(2, None);
    let Some(exp) = exp else {
        return BigRat::from_integer(BigInt::from(0));
    };
    let m = BigInt::parse_bytes(digits.as_bytes(), 2).expect("binary digits");
    let shift = exp as i64 - digits.len() as i64;
    let r = if shift >= 0 {
        BigRat::from_integer(m << shift as usize)
    } else {
        BigRat::new(m, BigInt::from(1) << (-shift) as usize)
    };
    if neg {
        -r
    } else {
        r
    }
}

impl Cx {
    pub fn new(re: Float, im: Float) -> Cx {
        Cx { re, im }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Cx {
        Cx {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_rat(prec: u32, re: &BigRat, im: &BigRat) -> Cx {
        Cx {
            re: float_from_rat(prec, re),
            im: float_from_rat(prec, im),
        }
    }

    pub fn real(x: Float) -> Cx {
        let im = Float::new(x.prec());
        Cx { re: x, im }
    }

    pub fn zero(prec: u32) -> Cx {
        Cx::from_f64(prec, 0.0, 0.0)
    }

    pub fn one(prec: u32) -> Cx {
        Cx::from_f64(prec, 1.0, 0.0)
    }

    pub fn i(prec: u32) -> Cx {
        Cx::from_f64(prec, 0.0, 1.0)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// Copy at a different working precision.
    pub fn with_prec(&self, prec: u32) -> Cx {
        Cx {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Cx {
        Cx {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, &self.re * &self.re) + Float::with_val(p, &self.im * &self.im)
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn scale(&self, s: &Float) -> Cx {
        let p = self.prec();
        Cx {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn scale_f64(&self, s: f64) -> Cx {
        self.scale(&Float::with_val(self.prec(), s))
    }

    /// (a/b)·self at full precision.
    pub fn scale_frac(&self, a: i64, b: u64) -> Cx {
        let p = self.prec();
        Cx {
            re: Float::with_val(p, &self.re * a) / b,
            im: Float::with_val(p, &self.im * a) / b,
        }
    }

    pub fn div(&self, o: &Cx) -> Cx {
        let d = o.norm_sqr();
        let num = self * &o.conj();
        Cx {
            re: num.re / &d,
            im: num.im / &d,
        }
    }

    pub fn inv(&self) -> Cx {
        Cx::one(self.prec()).div(self)
    }

    pub fn sqr(&self) -> Cx {
        self * self
    }

    pub fn powu(&self, e: u32) -> Cx {
        let mut r = Cx::one(self.prec());
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Cx {
        let p = self.prec();
        let r = self.abs();
        let re = (Float::with_val(p, &r + &self.re) / 2u32).sqrt();
        let mut im = (Float::with_val(p, &r - &self.re) / 2u32).sqrt();
        if self.im.is_sign_negative() {
            im = -im;
        }
        Cx { re, im }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for &Cx {
    type Output = Cx;
    fn add(self, o: &Cx) -> Cx {
        let p = self.prec();
        Cx {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }
}

impl Sub for &Cx {
    type Output = Cx;
    fn sub(self, o: &Cx) -> Cx {
        let p = self.prec();
        Cx {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }
}

impl Mul for &Cx {
    type Output = Cx;
    fn mul(self, o: &Cx) -> Cx {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        Cx { re, im }
    }
}

impl Neg for &Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat_frac;

    #[test]
    fn arithmetic() {
        let a = Cx::from_f64(128, 1.0, 2.0);
        let b = Cx::from_f64(128, -3.0, 0.5);
        let q = a.div(&b);
        let back = &q * &b;
        assert!((&back - &a).abs_f64() < 1e-35);
        let s = Cx::from_f64(128, -4.0, 0.0).sqrt();
        assert_eq!(s.to_f64(), (0.0, 2.0));
        let t = Cx::from_rat(128, &rat_frac(1, 3), &rat_frac(-2, 7));
        assert!((t.re.to_f64() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(float_to_rat(&Float::with_val(64, -0.375)), rat_frac(-3, 8));
        assert_eq!(float_to_rat(&Float::with_val(64, 40)), rat_frac(40, 1));
    }
}
