//! Coefficient fields for the Heisenberg machinery: exact ℚ(ζ_m) and a tolerance-based ℂ.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::exact::field::Field;
use crate::exact::matrix::{rank, Matrix};
use crate::exact::numfield::{NumberField, NumberFieldElem};
use crate::exact::poly::QPoly;
use crate::exact::rational::{fmt_rat, rat_to_f64, BigRat};

/// A field containing the m-th roots of unity, with a fixed primitive ζ_m.
pub trait CoeffField: Field + Sync {
    /// The order m of the distinguished root of unity.
    fn root_order(&self) -> u64;
    /// ζ_m^k.
    fn root_of_unity(&self, k: u64) -> Self::Elem;
    fn from_rat(&self, r: &BigRat) -> Self::Elem;
    /// The embedding sending ζ_m to e^{2πi/m}.
    fn to_complex(&self, e: &Self::Elem) -> Complex64;
    /// Rank of the matrix with the given rows, each of length `cols`.
    fn rank_rows(&self, rows: &[Vec<Self::Elem>], cols: usize) -> usize;
    fn elem_to_json(&self, e: &Self::Elem) -> Value;

    /// c·ζ_m^k·e.
    fn mul_scaled_root(&self, e: &Self::Elem, c: &BigRat, k: u64) -> Self::Elem {
        self.mul(e, &self.mul(&self.from_rat(c), &self.root_of_unity(k)))
    }

    /// Zero relative to `scale`: exact fields ignore the scale.
    fn is_negligible(&self, e: &Self::Elem, scale: f64) -> bool;

    /// Scales v so that its first non-negligible coordinate is 1.
    fn projective_normalize(&self, v: &[Self::Elem]) -> Vec<Self::Elem> {
        let size = v
            .iter()
            .map(|x| self.to_complex(x).norm())
            .fold(0.0, f64::max);
        let Some(p) = v.iter().position(|x| !self.is_negligible(x, size)) else {
            return v.to_vec();
        };
        let inv = self.inv(&v[p]).expect("pivot is nonzero");
        v.iter().map(|x| self.mul(x, &inv)).collect()
    }

    /// Equality of projectively normalized vectors.
    fn same_point(&self, u: &[Self::Elem], v: &[Self::Elem]) -> bool {
        let size = u
            .iter()
            .chain(v)
            .map(|x| self.to_complex(x).norm())
            .fold(0.0, f64::max);
        u.len() == v.len()
            && u.iter()
                .zip(v)
                .all(|(x, y)| self.is_negligible(&self.sub(x, y), size))
    }
}

/// Φ_m, computed as (x^m − 1)/Π_{d | m, d < m} Φ_d.
pub fn cyclotomic_polynomial(m: u64) -> QPoly {
    assert!(m > 0, "cyclotomic index must be positive");
    let mut p = QPoly::monomial(BigRat::one(), m as usize).sub(&QPoly::one());
    for d in 1..m {
        if m % d == 0 {
            let (q, r) = p.divrem(&cyclotomic_polynomial(d));
            debug_assert!(r.is_zero());
            p = q;
        }
    }
    p
}

/// ℚ(ζ_m) in the power basis of ζ_m = x mod Φ_m.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    m: u64,
    field: NumberField,
    /// x^k mod Φ_m for k < m.
    powers: Vec<NumberFieldElem>,
}

impl Cyclotomic {
    pub fn new(m: u64) -> Cyclotomic {
        let phi = cyclotomic_polynomial(m);
        let field = NumberField::new(phi).expect("cyclotomic polynomials are irreducible");
        let powers = (0..m)
            .map(|k| field.from_poly(&QPoly::monomial(BigRat::one(), k as usize)))
            .collect();
        Cyclotomic { m, field, powers }
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn number_field(&self) -> &NumberField {
        &self.field
    }

    /// ζ^k · e, computed by a shift in the power basis.
    pub fn mul_root(&self, e: &NumberFieldElem, k: u64) -> NumberFieldElem {
        let n = self.degree();
        let mut out = vec![BigRat::zero(); n];
        for (i, c) in e.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &self.powers[((i as u64 + k) % self.m) as usize];
            for (o, q) in out.iter_mut().zip(p) {
                if !q.is_zero() {
                    *o += c * q;
                }
            }
        }
        out
    }
}

impl Field for Cyclotomic {
    type Elem = NumberFieldElem;
    fn zero(&self) -> NumberFieldElem {
        self.field.zero()
    }
    fn one(&self) -> NumberFieldElem {
        self.field.one()
    }
    fn from_i64(&self, n: i64) -> NumberFieldElem {
        self.field.from_i64(n)
    }
    fn add(&self, a: &NumberFieldElem, b: &NumberFieldElem) -> NumberFieldElem {
        self.field.add(a, b)
    }
    fn sub(&self, a: &NumberFieldElem, b: &NumberFieldElem) -> NumberFieldElem {
        self.field.sub(a, b)
    }
    fn mul(&self, a: &NumberFieldElem, b: &NumberFieldElem) -> NumberFieldElem {
        self.field.mul(a, b)
    }
    fn neg(&self, a: &NumberFieldElem) -> NumberFieldElem {
        self.field.neg(a)
    }
    fn inv(&self, a: &NumberFieldElem) -> Option<NumberFieldElem> {
        self.field.inv(a)
    }
    fn is_zero(&self, a: &NumberFieldElem) -> bool {
        self.field.is_zero(a)
    }
}

impl CoeffField for Cyclotomic {
    fn root_order(&self) -> u64 {
        self.m
    }
    fn root_of_unity(&self, k: u64) -> NumberFieldElem {
        self.powers[(k % self.m) as usize].clone()
    }
    fn from_rat(&self, r: &BigRat) -> NumberFieldElem {
        self.field.from_rat(r.clone())
    }
    fn to_complex(&self, e: &NumberFieldElem) -> Complex64 {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU / self.m as f64);
        e.iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * z + rat_to_f64(c))
    }
    fn rank_rows(&self, rows: &[Vec<NumberFieldElem>], cols: usize) -> usize {
        rank(self, &Matrix::from_rows(rows.to_vec(), cols))
    }
    fn elem_to_json(&self, e: &NumberFieldElem) -> Value {
        json!(e.iter().map(fmt_rat).collect::<Vec<_>>())
    }
    fn is_negligible(&self, e: &NumberFieldElem, _scale: f64) -> bool {
        self.field.is_zero(e)
    }
    fn mul_scaled_root(&self, e: &NumberFieldElem, c: &BigRat, k: u64) -> NumberFieldElem {
        let mut out = self.mul_root(e, k);
        if !c.is_one() {
            out.iter_mut().for_each(|x| *x *= c);
        }
        out
    }
}

/// ℂ with zero tested against a tolerance; ζ_m = e^{2πi/m}.
#[derive(Clone, Copy, Debug)]
pub struct ComplexField {
    pub m: u64,
    pub tol: f64,
}

impl ComplexField {
    pub fn new(m: u64, tol: f64) -> ComplexField {
        ComplexField { m, tol }
    }
}

/// Numerical rank: singular values above `tol` times the largest one.
pub fn numerical_rank(rows: &[Vec<Complex64>], cols: usize, tol: f64) -> usize {
    if rows.is_empty() || cols == 0 {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * top).count()
}

impl Field for ComplexField {
    type Elem = Complex64;
    fn zero(&self) -> Complex64 {
        Complex64::zero()
    }
    fn one(&self) -> Complex64 {
        Complex64::one()
    }
    fn from_i64(&self, n: i64) -> Complex64 {
        Complex64::new(n as f64, 0.0)
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }
    fn inv(&self, a: &Complex64) -> Option<Complex64> {
        (a.norm() > self.tol).then(|| a.inv())
    }
    fn is_zero(&self, a: &Complex64) -> bool {
        a.norm() <= self.tol
    }
}

impl CoeffField for ComplexField {
    fn root_order(&self) -> u64 {
        self.m
    }
    fn root_of_unity(&self, k: u64) -> Complex64 {
        Complex64::from_polar(
            1.0,
            std::f64::consts::TAU * (k % self.m) as f64 / self.m as f64,
        )
    }
    fn from_rat(&self, r: &BigRat) -> Complex64 {
        Complex64::new(rat_to_f64(r), 0.0)
    }
    fn to_complex(&self, e: &Complex64) -> Complex64 {
        *e
    }
    fn rank_rows(&self, rows: &[Vec<Complex64>], cols: usize) -> usize {
        numerical_rank(rows, cols, self.tol)
    }
    fn elem_to_json(&self, e: &Complex64) -> Value {
        json!([e.re, e.im])
    }
    fn is_negligible(&self, e: &Complex64, scale: f64) -> bool {
        e.norm() <= self.tol * scale.max(f64::MIN_POSITIVE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(
            cyclotomic_polynomial(16),
            QPoly::from_ints(&[1, 0, 0, 0, 0, 0, 0, 0, 1])
        );
        assert_eq!(
            cyclotomic_polynomial(12),
            QPoly::from_ints(&[1, 0, -1, 0, 1])
        );
        assert_eq!(cyclotomic_polynomial(1), QPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn roots_of_unity_in_q_zeta16() {
        let k = Cyclotomic::new(16);
        assert_eq!(k.degree(), 8);
        let z = k.root_of_unity(1);
        assert_eq!(k.mul(&k.root_of_unity(9), &k.root_of_unity(7)), k.one());
        assert_eq!(k.mul_root(&z, 15), k.one());
        assert_eq!(k.root_of_unity(8), k.from_i64(-1));
        let c = k.to_complex(&k.root_of_unity(4));
        assert!((c - Complex64::i()).norm() < 1e-15);
    }

    #[test]
    fn numerical_rank_of_a_rank_one_matrix() {
        let rows = vec![
            vec![Complex64::new(1.0, 1.0), Complex64::new(2.0, 0.0)],
            vec![Complex64::new(2.0, 2.0), Complex64::new(4.0, 0.0)],
        ];
        assert_eq!(numerical_rank(&rows, 2, 1e-10), 1);
    }
}
