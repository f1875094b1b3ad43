//! Approximate idempotents of commutative étale algebras over ℚ_ℓ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::StructuredAlgebra;
use crate::error::{Error, Result};
use crate::exact::json::rat_vec_to_json;
use crate::exact::rational::{rat_valuation, BigRat};

use super::lattice::ell_pow;
use super::order::{maximal_order_at, LocalOrder};

/// An element e with e² ≡ e (mod ℓ^precision) in the coordinates of a maximal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxIdempotent {
    pub element: Vec<BigRat>,
    pub ell: u64,
    pub precision: u32,
}

impl ApproxIdempotent {
    pub fn to_json(&self) -> Value {
        json!({ "element": rat_vec_to_json(&self.element), "ell": self.ell, "N": self.precision })
    }
}

/// Output of [`split_etale`]: the maximal order used and one idempotent per field factor.
#[derive(Clone, Debug)]
pub struct EtaleSplitting {
    pub order: LocalOrder,
    pub idempotents: Vec<ApproxIdempotent>,
}

impl LocalOrder {
    /// Whether a − b ∈ ℓ^n·O.
    pub fn congruent(&self, a: &[BigRat], b: &[BigRat], n: u32) -> bool {
        let d: Vec<BigRat> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.lattice
            .coords(&d)
            .iter()
            .all(|c| rat_valuation(c, self.ell).is_none_or(|v| v >= n as i64))
    }
}

/// Multiplication in O/ℓ^M·O with integer structure constants in the order basis.
struct ResidueOrder {
    modulus: BigInt,
    mult: Vec<Vec<Vec<BigInt>>>,
}

impl ResidueOrder {
    fn new(alg: &StructuredAlgebra, o: &LocalOrder, modulus: BigInt) -> ResidueOrder {
        let b = o.basis();
        let mult = b
            .iter()
            .map(|x| {
                b.iter()
                    .map(|y| {
                        o.lattice
                            .coords_mod(&alg.mul(x, y), &modulus)
                            .expect("order is closed")
                    })
                    .collect()
            })
            .collect();
        ResidueOrder { modulus, mult }
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = a.len();
        let mut out = vec![BigInt::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.mult[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        out.iter().map(|x| x.mod_floor(&self.modulus)).collect()
    }

    fn pow(&self, a: &[BigInt], mut e: u64, one: &[BigInt]) -> Vec<BigInt> {
        let mut r = one.to_vec();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }
}

/// Splits a commutative étale algebra over ℚ_ℓ into field factors at precision N.
///
/// The idempotents of O/rad(O/ℓO) are lifted and then raised to the power ℓ^{M·dim} in
/// O/ℓ^M, M = N + dim: on each factor a lift is either topologically nilpotent or lies in
/// 1 + 𝔪, so the powers converge to the true idempotent.
pub fn split_etale(alg: &StructuredAlgebra, ell: u64, n: u32) -> Result<EtaleSplitting> {
    if !alg.is_commutative() {
        return Err(Error::NotCommutative);
    }
    if !alg.is_semisimple() {
        return Err(Error::NotEtale(
            "trace form is degenerate, so nilpotents exist".into(),
        ));
    }
    if n == 0 {
        return Err(Error::PrecisionTooLow(
            "precision must be at least 1".into(),
        ));
    }
    let o = maximal_order_at(alg, ell)?;
    let dim = alg.dim();
    let a = o.residue_algebra(alg);
    let j = a.radical();
    let q = a.quotient(&j);
    let big_m = n + dim as u32;
    let modulus = ell_pow(ell, big_m);
    let ring = ResidueOrder::new(alg, &o, modulus.clone());
    let one: Vec<BigInt> = o
        .lattice
        .coords_mod(&alg.one(), &modulus)
        .expect("unit in order");
    let half = &modulus / 2;
    let mut idempotents = Vec::new();
    for e in q.alg.primitive_central_idempotents() {
        let lift: Vec<BigInt> = q.lift(&e).iter().map(|&x| BigInt::from(x)).collect();
        let mut x = lift;
        for _ in 0..big_m as usize * dim {
            x = ring.pow(&x, ell, &one);
        }
        let sym: Vec<BigInt> = x
            .into_iter()
            .map(|c| if c > half { c - &modulus } else { c })
            .collect();
        idempotents.push(ApproxIdempotent {
            element: o.lattice.combine(&sym),
            ell,
            precision: n,
        });
    }
    Ok(EtaleSplitting {
        order: o,
        idempotents,
    })
}

/// Checks e² ≡ e, pairwise orthogonality and Σe ≡ 1, all modulo ℓ^N in the order.
pub fn check_splitting(alg: &StructuredAlgebra, s: &EtaleSplitting) -> bool {
    let o = &s.order;
    let es = &s.idempotents;
    let Some(n) = es.first().map(|e| e.precision) else {
        return false;
    };
    let zero = alg.zero();
    let mut sum = alg.zero();
    for (i, e) in es.iter().enumerate() {
        if !o.congruent(&alg.mul(&e.element, &e.element), &e.element, n) {
            return false;
        }
        for f in &es[i + 1..] {
            if !o.congruent(&alg.mul(&e.element, &f.element), &zero, n) {
                return false;
            }
        }
        sum = alg.add(&sum, &e.element);
    }
    o.congruent(&sum, &alg.one(), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::QPoly;
    use crate::exact::rational::rat;

    #[test]
    fn split_quadratic_is_exact() {
        let a = StructuredAlgebra::from_poly(&QPoly::from_ints(&[0, -1, 1])).unwrap();
        let s = split_etale(&a, 5, 3).unwrap();
        let got: Vec<Vec<BigRat>> = s.idempotents.iter().map(|e| e.element.clone()).collect();
        assert_eq!(got.len(), 2);
        assert!(got.contains(&vec![rat(0), rat(1)]));
        assert!(got.contains(&vec![rat(1), rat(-1)]));
        assert!(check_splitting(&a, &s));
    }

    #[test]
    fn gaussian_at_five_and_three() {
        let a = StructuredAlgebra::from_poly(&QPoly::from_ints(&[1, 0, 1])).unwrap();
        let s = split_etale(&a, 5, 4).unwrap();
        assert_eq!(s.idempotents.len(), 2);
        assert!(check_splitting(&a, &s));
        let s3 = split_etale(&a, 3, 4).unwrap();
        assert_eq!(s3.idempotents.len(), 1);
        assert!(s3.order.congruent(&s3.idempotents[0].element, &a.one(), 4));
        assert!(matches!(
            split_etale(&StructuredAlgebra::quaternion(&rat(-1), &rat(-1)), 2, 3),
            Err(Error::NotCommutative)
        ));
    }
}
