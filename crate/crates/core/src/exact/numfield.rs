//! Absolute number fields ℚ[x]/(f) with power-basis coordinates.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::factor::is_irreducible_rational;
use super::field::Field;
use super::poly::QPoly;
use super::rational::BigRat;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NumberField {
    modulus: QPoly,
}

/// Element of a number field: power-basis coordinates, length equal to the degree.
pub type NumberFieldElem = Vec<BigRat>;

impl NumberField {
    /// Checks that `modulus` is monic, integral and irreducible over ℚ.
    pub fn new(modulus: QPoly) -> Result<Self> {
        if modulus.deg() == 0
            || !modulus.lead().is_one()
            || !modulus.coeffs().iter().all(|c| c.is_integer())
        {
            return Err(Error::InvalidInput(
                "defining polynomial must be monic with integer coefficients".into(),
            ));
        }
        if !is_irreducible_rational(&modulus) {
            return Err(Error::InvalidInput(format!(
                "{modulus} is reducible over Q"
            )));
        }
        Ok(NumberField { modulus })
    }

    /// ℚ itself, as ℚ[x]/(x).
    pub fn rationals() -> Self {
        NumberField {
            modulus: QPoly::x(),
        }
    }

    pub fn modulus(&self) -> &QPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn from_poly(&self, p: &QPoly) -> NumberFieldElem {
        let r = p.rem(&self.modulus);
        (0..self.degree()).map(|i| r.coeff(i)).collect()
    }

    pub fn to_poly(&self, a: &NumberFieldElem) -> QPoly {
        QPoly::new(a.clone())
    }

    pub fn from_rat(&self, r: BigRat) -> NumberFieldElem {
        let mut v = vec![BigRat::zero(); self.degree()];
        v[0] = r;
        v
    }

    /// The class of x.
    pub fn generator(&self) -> NumberFieldElem {
        self.from_poly(&QPoly::x())
    }

    pub fn is_rational(&self, a: &NumberFieldElem) -> bool {
        a.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn pow(&self, a: &NumberFieldElem, e: u32) -> NumberFieldElem {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    /// Matrix of multiplication by `a` acting on coordinate rows (row i is a·x^i).
    pub fn mul_matrix(&self, a: &NumberFieldElem) -> Vec<Vec<BigRat>> {
        (0..self.degree())
            .map(|i| {
                let mut e = vec![BigRat::zero(); self.degree()];
                e[i] = BigRat::one();
                self.mul(a, &e)
            })
            .collect()
    }

    /// Absolute trace Tr_{K/ℚ}.
    pub fn trace(&self, a: &NumberFieldElem) -> BigRat {
        let m = self.mul_matrix(a);
        (0..self.degree()).map(|i| m[i][i].clone()).sum()
    }

    pub fn norm(&self, a: &NumberFieldElem) -> BigRat {
        let m = self.mul_matrix(a);
        let n = self.degree();
        let mat = super::matrix::Matrix::from_rows(m, n);
        super::matrix::determinant(&super::field::Rationals, &mat)
    }
}

impl Field for NumberField {
    type Elem = NumberFieldElem;

    fn zero(&self) -> NumberFieldElem {
        vec![BigRat::zero(); self.degree()]
    }
    fn one(&self) -> NumberFieldElem {
        self.from_rat(BigRat::one())
    }
    fn from_i64(&self, n: i64) -> NumberFieldElem {
        self.from_rat(super::rational::rat(n))
    }
    fn add(&self, a: &NumberFieldElem, b: &NumberFieldElem) -> NumberFieldElem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn sub(&self, a: &NumberFieldElem, b: &NumberFieldElem) -> NumberFieldElem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }
    fn mul(&self, a: &NumberFieldElem, b: &NumberFieldElem) -> NumberFieldElem {
        self.from_poly(&self.to_poly(a).mul(&self.to_poly(b)))
    }
    fn neg(&self, a: &NumberFieldElem) -> NumberFieldElem {
        a.iter().map(|x| -x).collect()
    }
    fn inv(&self, a: &NumberFieldElem) -> Option<NumberFieldElem> {
        if a.iter().all(|c| c.is_zero()) {
            return None;
        }
        // Extended Euclid in ℚ[x]: s·a + t·f = 1.
        let (mut r0, mut r1) = (self.modulus.clone(), self.to_poly(a));
        let (mut s0, mut s1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        if r0.deg() != 0 {
            return None;
        }
        let c = r0.coeff(0);
        Some(self.from_poly(&s0.scale(&c.recip())))
    }
    fn is_zero(&self, a: &NumberFieldElem) -> bool {
        a.iter().all(|c| c.is_zero())
    }
}
