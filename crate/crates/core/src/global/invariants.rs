//! Places, Brauer invariants and the global decomposition of semisimple algebras.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::algebra::StructuredAlgebra;
use crate::error::{Error, Result};
use crate::exact::field::Field;
use crate::exact::json::rat_vec_to_json;
use crate::exact::matrix::determinant;
use crate::exact::numfield::{NumberField, NumberFieldElem};
use crate::exact::rational::{factor_integer, fmt_rat, rat_frac, BigRat};
use crate::exact::roots::real_roots;
use crate::exact::Rationals;
use crate::padic::{local_decomposition, split_etale};

use super::center::{center_idempotents, factor_algebra, integral_order_basis, over_center};
use super::signature::inertia_at_real_place;

/// Precision used for the approximate idempotents behind finite-place invariants.
const LOCAL_PRECISION: u32 = 3;

/// A place of the base field: the `index`-th prime above `ell`, a real embedding (the
/// `i`-th real root of the defining polynomial in increasing order), or a complex pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite { ell: u64, index: usize },
    Real(usize),
    Complex(usize),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite { ell, index: 0 } => write!(f, "{ell}"),
            Place::Finite { ell, index } => write!(f, "{ell}#{index}"),
            Place::Real(0) => write!(f, "inf"),
            Place::Real(i) => write!(f, "inf#{i}"),
            Place::Complex(i) => write!(f, "C#{i}"),
        }
    }
}

/// The base field of `alg` (ℚ when none is recorded).
fn base_of(alg: &StructuredAlgebra) -> NumberField {
    alg.base().cloned().unwrap_or_else(NumberField::rationals)
}

/// Gram matrix of Tr_{E/K}(x·y) on the K-basis e_i.
fn k_trace_gram(alg: &StructuredAlgebra) -> (NumberField, Vec<Vec<NumberFieldElem>>) {
    let k = base_of(alg);
    let d = k.degree();
    let n = alg.dim() / d;
    let ktrace = |x: &[BigRat]| -> NumberFieldElem {
        let m = alg.left_matrix(x);
        let mut t = Field::zero(&k);
        for i in 0..n {
            for a in 0..d {
                t[a] += m.get(i * d + a, i * d);
            }
        }
        t
    };
    let basis: Vec<Vec<BigRat>> = (0..n).map(|i| alg.basis_vector(i * d)).collect();
    let gram = basis
        .iter()
        .map(|x| basis.iter().map(|y| ktrace(&alg.mul(x, y))).collect())
        .collect();
    (k, gram)
}

/// Outcome of the real-place test on a central simple algebra of dimension m² over K.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RealSplitting {
    pub split: bool,
    pub signature: (usize, usize),
}

/// Decides whether E ⊗_{K,σ} ℝ is a matrix algebra over ℝ (rather than over ℍ) from the
/// signature of its trace form at the `place`-th real embedding σ.
pub fn real_splitting_at(alg: &StructuredAlgebra, place: usize) -> Result<RealSplitting> {
    let (k, gram) = k_trace_gram(alg);
    let roots = real_roots(k.modulus());
    let root = roots
        .into_iter()
        .nth(place)
        .ok_or_else(|| Error::InvalidInput(format!("base field has no real place {place}")))?;
    let (zero, pos, neg) = inertia_at_real_place(&k, root, gram);
    let dim = alg.dim() / k.degree();
    let m = (dim as f64).sqrt().round() as usize;
    if zero != 0 || m * m != dim {
        return Err(Error::UnexpectedSignature(pos, neg));
    }
    let split_sig = (m * (m + 1) / 2, m * (m - 1) / 2);
    if (pos, neg) == split_sig {
        return Ok(RealSplitting {
            split: true,
            signature: (pos, neg),
        });
    }
    if m % 2 == 0 && (neg, pos) == split_sig {
        return Ok(RealSplitting {
            split: false,
            signature: (pos, neg),
        });
    }
    Err(Error::UnexpectedSignature(pos, neg))
}

/// [`real_splitting_at`] at the first real place (the unique one when K = ℚ).
pub fn real_splitting(alg: &StructuredAlgebra) -> Result<RealSplitting> {
    real_splitting_at(alg, 0)
}

/// Rational primes dividing the discriminant of the trace form on ℤ·1 + Σ ℤ·D e_i.
fn discriminant_primes(alg: &StructuredAlgebra) -> Result<Vec<u64>> {
    let basis = integral_order_basis(alg);
    let det = determinant(&Rationals, &alg.trace_form_on(&basis));
    if det.is_zero() {
        return Err(Error::DegenerateTraceForm);
    }
    let mut primes = Vec::new();
    for part in [det.numer().abs(), det.denom().clone()] {
        for (p, _) in factor_integer(&part) {
            let p = p
                .to_u64()
                .filter(|&p| p < 1 << 32)
                .ok_or_else(|| Error::Unsupported(format!("prime {p} exceeds 2^32")))?;
            primes.push(p);
        }
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

/// Number of primes of the center above ℓ.
fn primes_above(alg: &StructuredAlgebra, ell: u64) -> Result<usize> {
    let z = alg.center();
    let zalg = alg.subalgebra(&z, &alg.one())?;
    Ok(split_etale(&zalg, ell, 1)?.idempotents.len())
}

/// Every place at which an algebra central over its base may ramify: the finite places
/// above primes dividing the trace-form discriminant of a seeded order, and all
/// archimedean places.
pub fn ramified_place_candidates(alg: &StructuredAlgebra) -> Result<Vec<Place>> {
    let mut out = Vec::new();
    for ell in discriminant_primes(alg)? {
        for index in 0..primes_above(alg, ell)? {
            out.push(Place::Finite { ell, index });
        }
    }
    let k = base_of(alg);
    let r = real_roots(k.modulus()).len();
    out.extend((0..r).map(Place::Real));
    out.extend((0..(k.degree() - r) / 2).map(Place::Complex));
    Ok(out)
}

/// Nonzero local invariants together with the raw candidate list they were drawn from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantTable {
    pub invariants: BTreeMap<Place, BigRat>,
    pub candidates: Vec<Place>,
}

impl InvariantTable {
    /// Σ_v inv_v mod 1.
    pub fn sum_mod_one(&self) -> BigRat {
        let s: BigRat = self.invariants.values().sum();
        &s - BigRat::from_integer(s.floor().to_integer())
    }

    /// Index of the algebra: lcm of the invariant denominators.
    pub fn index(&self) -> u64 {
        self.invariants.values().fold(1u64, |acc, v| {
            acc.lcm(&v.denom().to_u64().expect("small denominator"))
        })
    }

    pub fn to_json(&self) -> Value {
        let inv: Map<String, Value> = self
            .invariants
            .iter()
            .map(|(p, v)| (p.to_string(), json!(fmt_rat(v))))
            .collect();
        json!({
            "invariants": inv,
            "candidates": self.candidates.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// The presentation of a simple algebra that is central over its recorded base.
fn central_presentation(alg: &StructuredAlgebra) -> Result<StructuredAlgebra> {
    if !alg.is_semisimple() {
        return Err(Error::NotSemisimple);
    }
    if alg.center().len() == base_of(alg).degree() {
        Ok(alg.clone())
    } else {
        over_center(alg)
    }
}

/// All nonzero local invariants of a central simple algebra. An algebra that is simple
/// but not central over its base is first rewritten over its center.
pub fn all_invariants(alg: &StructuredAlgebra) -> Result<InvariantTable> {
    let c = central_presentation(alg)?;
    let candidates = ramified_place_candidates(&c)?;
    let mut invariants = BTreeMap::new();
    let mut done = Vec::new();
    for p in &candidates {
        match *p {
            Place::Finite { ell, .. } => {
                if done.contains(&ell) {
                    continue;
                }
                done.push(ell);
                for (index, (_, li)) in local_decomposition(&c, ell, LOCAL_PRECISION)?
                    .into_iter()
                    .enumerate()
                {
                    if !li.invariant.is_zero() {
                        invariants.insert(Place::Finite { ell, index }, li.invariant);
                    }
                }
            }
            Place::Real(i) => {
                if !real_splitting_at(&c, i)?.split {
                    invariants.insert(Place::Real(i), rat_frac(1, 2));
                }
            }
            Place::Complex(_) => {}
        }
    }
    Ok(InvariantTable {
        invariants,
        candidates,
    })
}

/// One simple factor M_n(D) of E, with D of index d over its center Z and [Z : K] = center_degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleFactor {
    pub idempotent: Vec<BigRat>,
    pub n: u64,
    pub d: u64,
    pub center_degree: usize,
    pub invariants: InvariantTable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalDecomposition {
    pub factors: Vec<SimpleFactor>,
    /// dim_K E.
    pub dim: usize,
}

impl GlobalDecomposition {
    pub fn s(&self) -> usize {
        self.factors.len()
    }

    pub fn matrix_sizes(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.n).collect()
    }

    pub fn division_dims(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.d).collect()
    }

    /// Σ d²n²[Z:K], which equals dim_K E.
    pub fn dimension_count(&self) -> usize {
        self.factors
            .iter()
            .map(|f| (f.d * f.d * f.n * f.n) as usize * f.center_degree)
            .sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "s": self.s(),
            "dim": self.dim,
            "factors": self.factors.iter().map(|f| json!({
                "idempotent": rat_vec_to_json(&f.idempotent),
                "n": f.n,
                "d": f.d,
                "center_degree": f.center_degree,
                "invariants": f.invariants.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Wedderburn decomposition of a semisimple algebra over its base K: exact central
/// idempotents, and per factor the index d (lcm of invariant denominators) and matrix size n.
pub fn decompose(alg: &StructuredAlgebra) -> Result<GlobalDecomposition> {
    let kdeg = base_of(alg).degree();
    let mut factors = Vec::new();
    for e in center_idempotents(alg)? {
        let part = factor_algebra(alg, &e)?;
        let c = over_center(&part)?;
        let zdeg = c.base().map_or(1, |z| z.degree());
        let invariants = all_invariants(&c)?;
        let d = invariants.index();
        let over_z = (c.dim() / zdeg) as u64;
        let n = ((over_z / (d * d)) as f64).sqrt().round() as u64;
        if n * n * d * d != over_z {
            return Err(Error::InvalidInput(format!(
                "factor of dimension {over_z} over its center is inconsistent with index {d}"
            )));
        }
        factors.push(SimpleFactor {
            idempotent: e,
            n,
            d,
            center_degree: zdeg / kdeg,
            invariants,
        });
    }
    Ok(GlobalDecomposition {
        factors,
        dim: alg.dim() / kdeg,
    })
}

/// Whether every matrix size is divisible by k.
pub fn kth_power_divisibility(dec: &GlobalDecomposition, k: u64) -> bool {
    sizes_divisible(&dec.matrix_sizes(), k)
}

pub fn sizes_divisible(sizes: &[u64], k: u64) -> bool {
    k != 0 && sizes.iter().all(|n| n % k == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::QPoly;
    use crate::exact::rational::rat;

    #[test]
    fn real_signatures() {
        assert_eq!(
            real_splitting(&StructuredAlgebra::matrix_algebra(2)).unwrap(),
            RealSplitting {
                split: true,
                signature: (3, 1)
            }
        );
        let h = StructuredAlgebra::quaternion(&rat(-1), &rat(-1));
        assert_eq!(
            real_splitting(&h).unwrap(),
            RealSplitting {
                split: false,
                signature: (1, 3)
            }
        );
        assert_eq!(
            real_splitting(&StructuredAlgebra::matrix_algebra(4))
                .unwrap()
                .signature,
            (10, 6)
        );
        assert_eq!(
            real_splitting(&StructuredAlgebra::matrix_algebra(3))
                .unwrap()
                .signature,
            (6, 3)
        );
        let f = StructuredAlgebra::from_poly(&QPoly::from_ints(&[-2, 0, 1])).unwrap();
        assert!(matches!(
            real_splitting(&f),
            Err(Error::UnexpectedSignature(_, _))
        ));
    }

    #[test]
    fn candidates_and_tables() {
        let h = StructuredAlgebra::quaternion(&rat(-1), &rat(-1));
        assert_eq!(
            ramified_place_candidates(&h).unwrap(),
            vec![Place::Finite { ell: 2, index: 0 }, Place::Real(0)]
        );
        let t = all_invariants(&h).unwrap();
        let expected: BTreeMap<Place, BigRat> = [
            (Place::Finite { ell: 2, index: 0 }, rat_frac(1, 2)),
            (Place::Real(0), rat_frac(1, 2)),
        ]
        .into();
        assert_eq!(t.invariants, expected);
        assert_eq!(t.sum_mod_one(), rat(0));
        let q = StructuredAlgebra::from_poly(&QPoly::x()).unwrap();
        assert_eq!(ramified_place_candidates(&q).unwrap(), vec![Place::Real(0)]);
        assert!(all_invariants(&StructuredAlgebra::matrix_algebra(3))
            .unwrap()
            .invariants
            .is_empty());
    }

    #[test]
    fn decompositions() {
        let a = StructuredAlgebra::from_poly(&QPoly::from_ints(&[-1, 0, 1])).unwrap();
        let dec = decompose(&a).unwrap();
        assert_eq!(
            (dec.s(), dec.matrix_sizes(), dec.division_dims()),
            (2, vec![1, 1], vec![1, 1])
        );
        let dec = decompose(&StructuredAlgebra::matrix_algebra(2)).unwrap();
        assert_eq!((dec.s(), dec.matrix_sizes()), (1, vec![2]));
        let dec = decompose(&StructuredAlgebra::quaternion(&rat(-1), &rat(-1))).unwrap();
        assert_eq!(
            (dec.matrix_sizes(), dec.division_dims()),
            (vec![1], vec![2])
        );
        assert!(kth_power_divisibility(&dec, 1));
        assert!(!kth_power_divisibility(&dec, 2));
        assert!(sizes_divisible(&[2, 4], 2));
        assert!(!sizes_divisible(&[3], 2));
    }
}
