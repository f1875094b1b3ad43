//! Torsion points recognized from their analytic values, and traces of Frobenius.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rug::Float;
use serde_json::{json, Value};

use super::complex::{float_to_rat, Cx};
use super::curve::CurveModel;
use super::elliptic::{ProjPoint, Uniformizer};
use super::periods::PeriodLattice;
use crate::error::{Error, Result};
use crate::exact::factor::factor_rational;
use crate::exact::json::poly_to_json;
use crate::exact::poly::QPoly;
use crate::exact::rational::{is_prime_u64, rat_floor, rat_mod, BigRat};

/// Largest N accepted by [`torsion_points`].
pub const MAX_TORSION_ORDER: u64 = 12;

/// Continued-fraction convergent p/q of x with q ≤ `max_den` and |x − p/q| ≤ tol·max(1, |x|).
pub fn recognize_rational(x: &Float, max_den: &BigInt, tol: f64) -> Option<BigRat> {
    let r = float_to_rat(x);
    let scale = crate::exact::rational::rat_to_f64(&r).abs().max(1.0);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = r.clone();
    for _ in 0..400 {
        let a = rat_floor(&rest);
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if &k2 > max_den {
            return None;
        }
        let cand = BigRat::new(h2.clone(), k2.clone());
        let err = crate::exact::rational::rat_to_f64(&(&r - &cand)).abs();
        if err <= tol * scale {
            return Some(cand);
        }
        let frac = &rest - BigRat::from_integer(a);
        if frac.is_zero() {
            return None;
        }
        rest = BigRat::one() / frac;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    None
}

#[derive(Clone, Debug)]
pub struct TorsionPoint {
    /// Position (a, b) with z = (aω₁ + bω₂)/N.
    pub index: (u64, u64),
    pub point: ProjPoint,
    /// Minimal polynomials of the affine coordinates; `None` at the origin.
    pub x_minpoly: Option<QPoly>,
    pub y_minpoly: Option<QPoly>,
}

impl TorsionPoint {
    pub fn is_origin(&self) -> bool {
        self.x_minpoly.is_none()
    }

    pub fn to_json(&self) -> Value {
        match (&self.x_minpoly, &self.y_minpoly, self.point.to_affine()) {
            (Some(mx), Some(my), Some((x, y))) => json!({
                "index": [self.index.0, self.index.1],
                "x": [x.re.to_f64(), x.im.to_f64()],
                "y": [y.re.to_f64(), y.im.to_f64()],
                "x_minpoly": poly_to_json(mx),
                "y_minpoly": poly_to_json(my),
            }),
            _ => json!({"index": [self.index.0, self.index.1], "origin": true}),
        }
    }
}

/// Π (T − vᵢ) with rational coefficients recognized.
fn recognized_product(vals: &[Cx], prec: u32) -> Result<QPoly> {
    let wp = vals.first().map_or(prec, Cx::prec);
    let mut coeffs = vec![Cx::one(wp)];
    for v in vals {
        let mut next = vec![Cx::zero(wp); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * v);
        }
        coeffs = next;
    }
    let max_den = BigInt::one() << (prec / 4) as usize;
    let tol = 2f64.powi(-((prec / 2) as i32));
    let mut out = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let size = c.abs_f64().max(1.0);
        if c.im.to_f64().abs() > tol * size {
            return Err(Error::RecognitionFailed(format!(
                "coefficient not real; retry with more than {prec} bits"
            )));
        }
        let r = recognize_rational(&c.re, &max_den, tol).ok_or_else(|| {
            Error::RecognitionFailed(format!(
                "coefficient {} not recognized; retry with more than {prec} bits",
                c.re.to_f64()
            ))
        })?;
        out.push(r);
    }
    Ok(QPoly::new(out))
}

fn eval_cx(p: &QPoly, x: &Cx) -> Cx {
    let prec = x.prec();
    p.coeffs().iter().rev().fold(Cx::zero(prec), |acc, c| {
        &(&acc * x) + &Cx::real(super::complex::float_from_rat(prec, c))
    })
}

/// The irreducible factor of `p` vanishing at `v`.
fn factor_at(factors: &[QPoly], v: &Cx, prec: u32) -> Result<QPoly> {
    let tol = 2f64.powi(-((prec / 3) as i32));
    let best = factors
        .iter()
        .map(|f| {
            let scale = f
                .coeffs()
                .iter()
                .map(|c| crate::exact::rational::rat_to_f64(c).abs())
                .fold(1.0, f64::max)
                * v.abs_f64().max(1.0).powi(f.deg() as i32);
            (eval_cx(f, v).abs_f64() / scale, f)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or_else(|| Error::RecognitionFailed("empty factorization".into()))?;
    if best.0 > tol {
        return Err(Error::RecognitionFailed(format!(
            "no factor vanishes at the point; retry with more than {prec} bits"
        )));
    }
    Ok(best.1.clone())
}

/// The N² points of exp((1/N)Λ), with coordinates recognized as algebraic numbers through
/// the rational polynomials Π(X − x_P) and Π(Y − y_P).
pub fn torsion_points(u: &Uniformizer, lat: &PeriodLattice, n: u64) -> Result<Vec<TorsionPoint>> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be positive".into()));
    }
    if n > MAX_TORSION_ORDER {
        return Err(Error::TooLarge(format!(
            "N = {n} exceeds {MAX_TORSION_ORDER}"
        )));
    }
    let prec = u.precision();
    let wp = u.working_precision();
    let (w1, w2) = (lat.omega1().with_prec(wp), lat.omega2().with_prec(wp));
    let mut pts = Vec::with_capacity((n * n) as usize);
    for a in 0..n {
        for b in 0..n {
            let z = &w1.scale_frac(a as i64, n) + &w2.scale_frac(b as i64, n);
            let p = if a == 0 && b == 0 {
                ProjPoint::origin(wp)
            } else {
                u.exp(&z)?
            };
            pts.push(((a, b), p));
        }
    }
    let affine: Vec<Option<(Cx, Cx)>> = pts
        .iter()
        .map(|((a, b), p)| {
            if *a == 0 && *b == 0 {
                None
            } else {
                p.to_affine()
            }
        })
        .collect();
    if affine.iter().skip(1).any(Option::is_none) {
        return Err(Error::RecognitionFailed(
            "a nonzero torsion point landed at infinity".into(),
        ));
    }
    let xs: Vec<Cx> = affine.iter().flatten().map(|(x, _)| x.clone()).collect();
    let ys: Vec<Cx> = affine.iter().flatten().map(|(_, y)| y.clone()).collect();
    let fx: Vec<QPoly> = factor_rational(&recognized_product(&xs, prec)?)
        .into_iter()
        .map(|(f, _)| f)
        .collect();
    let fy: Vec<QPoly> = factor_rational(&recognized_product(&ys, prec)?)
        .into_iter()
        .map(|(f, _)| f)
        .collect();
    let mut out = Vec::with_capacity(pts.len());
    for ((index, point), aff) in pts.into_iter().zip(affine) {
        let (x_minpoly, y_minpoly) = match aff {
            Some((x, y)) => (
                Some(factor_at(&fx, &x, prec)?),
                Some(factor_at(&fy, &y, prec)?),
            ),
            None => (None, None),
        };
        out.push(TorsionPoint {
            index,
            point,
            x_minpoly,
            y_minpoly,
        });
    }
    Ok(out)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// a_p = p + 1 − #C(𝔽_p) = −Σ_x (f(x)/p), with the Legendre symbol from Euler's criterion.
pub fn frobenius_trace(c: &CurveModel, p: u64) -> Result<i64> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if p == 2 {
        return Err(Error::BadReduction(2));
    }
    let m = BigInt::from(p);
    let red = |r: &BigRat| {
        rat_mod(r, &m)
            .and_then(|v| v.mod_floor(&m).to_u64())
            .ok_or(Error::BadReduction(p))
    };
    let co: Vec<u64> = c.coeffs().iter().map(red).collect::<Result<_>>()?;
    if co[3] == 0 || red(&c.discriminant())? == 0 {
        return Err(Error::BadReduction(p));
    }
    let mut sum: i64 = 0;
    for x in 0..p {
        let v = co
            .iter()
            .rev()
            .fold(0u128, |acc, &a| (acc * x as u128 + a as u128) % p as u128)
            as u64;
        if v != 0 {
            sum += if pow_mod(v, (p - 1) / 2, p) == 1 {
                1
            } else {
                -1
            };
        }
    }
    Ok(-sum)
}

/// Whether |a_p| ≤ 2√p, checked exactly as a_p² ≤ 4p.
pub fn weil_bound_holds(ap: i64, p: u64) -> bool {
    (ap as i128).pow(2) <= 4 * p as i128
}
