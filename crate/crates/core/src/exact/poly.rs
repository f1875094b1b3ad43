//! Univariate polynomials over ℚ (constant term first).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::field::Rationals;
use super::matrix::{mat_mul, Matrix};
use super::rational::{fmt_rat, rat, rat_int, BigRat};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QPoly {
    coeffs: Vec<BigRat>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        QPoly::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        QPoly::new(c.iter().map(rat_int).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRat::one())
    }

    pub fn constant(c: BigRat) -> Self {
        QPoly::new(vec![c])
    }

    /// The monomial x.
    pub fn x() -> Self {
        QPoly::from_ints(&[0, 1])
    }

    pub fn monomial(c: BigRat, d: usize) -> Self {
        let mut v = vec![BigRat::zero(); d + 1];
        v[d] = c;
        QPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRat {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> BigRat {
        self.coeffs.last().cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        QPoly::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn scale(&self, s: &BigRat) -> Self {
        QPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = QPoly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Euclidean division; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        let lc = d.lead();
        let mut r = self.coeffs.clone();
        if r.len() < d.coeffs.len() {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![BigRat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        self.mul(o).divrem(&self.gcd(o)).0.monic()
    }

    pub fn derivative(&self) -> Self {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRat::zero(), |acc, c| acc * x + c)
    }

    /// Evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix<BigRat>) -> Matrix<BigRat> {
        let n = m.rows();
        let mut acc = Matrix::filled(n, n, BigRat::zero());
        for c in self.coeffs.iter().rev() {
            acc = mat_mul(&Rationals, &acc, m);
            for i in 0..n {
                let v = acc.get(i, i) + c;
                acc.set(i, i, v);
            }
        }
        acc
    }

    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs.iter().rev().fold(QPoly::zero(), |acc, c| {
            acc.mul(inner).add(&QPoly::constant(c.clone()))
        })
    }

    /// Square-free part (monic).
    pub fn squarefree_part(&self) -> Self {
        if self.deg() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Primitive integer polynomial proportional to `self` with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * rat_int(&den)).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sgn = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.iter().map(|c| c / &g * &sgn).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(fmt_rat).collect()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{}", fmt_rat(&a))?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{}", if show_coeff { "*" } else { "" }, i)?,
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial det(x·I − m) by the Faddeev–LeVerrier recursion.
pub fn char_poly(m: &Matrix<BigRat>) -> QPoly {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut coeffs = vec![BigRat::zero(); n + 1];
    coeffs[n] = BigRat::one();
    let mut mk = Matrix::filled(n, n, BigRat::zero());
    for k in 1..=n {
        let mut next = mat_mul(&Rationals, m, &mk);
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        mk = next;
        let am = mat_mul(&Rationals, m, &mk);
        let tr = (0..n).fold(BigRat::zero(), |s, i| s + am.get(i, i));
        coeffs[n - k] = -tr / rat(k as i64);
    }
    QPoly::new(coeffs)
}

/// Minimal polynomial: least common multiple of the minimal polynomials of the basis vectors.
pub fn minimal_polynomial(m: &Matrix<BigRat>) -> QPoly {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut acc = QPoly::one();
    for i in 0..n {
        let mut e = vec![BigRat::zero(); n];
        e[i] = BigRat::one();
        let p = vector_minimal_polynomial(m, &e);
        acc = acc.lcm(&p);
    }
    acc
}

/// Monic polynomial p of least degree with p(m)·v = 0.
pub fn vector_minimal_polynomial(m: &Matrix<BigRat>, v: &[BigRat]) -> QPoly {
    use super::matrix::{mat_vec, solve};
    let n = m.rows();
    let mut krylov: Vec<Vec<BigRat>> = vec![v.to_vec()];
    loop {
        let next = mat_vec(&Rationals, m, krylov.last().unwrap());
        let k = krylov.len();
        let a = Matrix::from_fn(n, k, |i, j| krylov[j][i].clone());
        if let Some(c) = solve(&Rationals, &a, &next) {
            let mut coeffs: Vec<BigRat> = c.into_iter().map(|x| -x).collect();
            coeffs.push(BigRat::one());
            return QPoly::new(coeffs);
        }
        krylov.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[i64]) -> Matrix<BigRat> {
        Matrix::from_fn(d.len(), d.len(), |i, j| {
            if i == j {
                rat(d[i])
            } else {
                BigRat::zero()
            }
        })
    }

    #[test]
    fn min_poly_examples() {
        let comp = Matrix::from_rows(vec![vec![rat(0), rat(2)], vec![rat(1), rat(0)]], 2);
        assert_eq!(minimal_polynomial(&comp), QPoly::from_ints(&[-2, 0, 1]));
        assert_eq!(
            minimal_polynomial(&diag(&[1, 1, 1])),
            QPoly::from_ints(&[-1, 1])
        );
        assert_eq!(
            minimal_polynomial(&diag(&[1, 1, 2])),
            QPoly::from_ints(&[2, -3, 1])
        );
    }

    #[test]
    fn char_poly_diag() {
        assert_eq!(
            char_poly(&diag(&[1, 1, 2])),
            QPoly::from_ints(&[-2, 5, -4, 1])
        );
    }

    #[test]
    fn division_and_gcd() {
        let a = QPoly::from_ints(&[-1, 0, 1]);
        let b = QPoly::from_ints(&[1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q, QPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(
            a.gcd(&QPoly::from_ints(&[-1, 0, 0, 1])),
            QPoly::from_ints(&[-1, 1])
        );
        assert_eq!(
            format!("{}", QPoly::from_ints(&[2, -3, 1])),
            "x^2 - 3*x + 2"
        );
    }
}
