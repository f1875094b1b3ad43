//! Weil candidate sets, precision thresholds, unique lifts and the isogeny degree bound.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{isqrt_u64, BigRat};
use crate::exact::residue::ResidueInt;

/// Default cap on |C| for [`weil_candidates`].
pub const CANDIDATE_BUDGET: u128 = 1 << 22;

/// A prime of K, known by a label and its norm.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeSite {
    pub label: String,
    pub norm: u64,
}

impl PrimeSite {
    pub fn new(label: impl Into<String>, norm: u64) -> Result<PrimeSite> {
        if norm < 2 {
            return Err(Error::InvalidInput(format!(
                "prime norm must be at least 2, got {norm}"
            )));
        }
        Ok(PrimeSite {
            label: label.into(),
            norm,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateState {
    Active,
    RemovedByLiftFailure,
    Resolved,
}

/// A tuple (a_𝔭)_{𝔭 ∈ T}, ordered like the site list it was built from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TraceCandidate {
    pub traces: BTreeMap<String, i64>,
    pub state: CandidateState,
}

impl TraceCandidate {
    pub fn new(sites: &[PrimeSite], values: &[i64]) -> TraceCandidate {
        let traces = sites
            .iter()
            .zip(values)
            .map(|(s, v)| (s.label.clone(), *v))
            .collect();
        TraceCandidate {
            traces,
            state: CandidateState::Active,
        }
    }

    /// Values in the order of `sites`.
    pub fn values(&self, sites: &[PrimeSite]) -> Vec<i64> {
        sites.iter().map(|s| self.traces[&s.label]).collect()
    }
}

/// ⌊2g√n⌋, computed as ⌊√(4g²n)⌋.
pub fn weil_bound(g: u64, norm: u64) -> u64 {
    isqrt_u64(4 * g * g * norm)
}

/// Π (2⌊2g√Nm𝔭⌋ + 1).
pub fn weil_candidate_count(sites: &[PrimeSite], g: u64) -> u128 {
    sites
        .iter()
        .map(|s| 2 * weil_bound(g, s.norm) as u128 + 1)
        .product()
}

/// All integer tuples with |a_𝔭| ≤ 2g√Nm𝔭, last site varying fastest.
pub fn weil_candidates(sites: &[PrimeSite], g: u64, budget: u128) -> Result<Vec<TraceCandidate>> {
    let count = weil_candidate_count(sites, g);
    if count > budget {
        return Err(Error::CandidateSetTooLarge(format!(
            "{count} candidates exceed the budget of {budget}"
        )));
    }
    let bounds: Vec<i64> = sites.iter().map(|s| weil_bound(g, s.norm) as i64).collect();
    let mut out = Vec::with_capacity(count as usize);
    let mut cur: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        out.push(TraceCandidate::new(sites, &cur));
        let mut i = cur.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < bounds[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = -bounds[i];
        }
    }
}

/// Least N ≥ 1 with Nm𝔭 < ℓ^{2N}/(16g²) for every site.
pub fn precision_threshold(sites: &[PrimeSite], g: u64, ell: u64) -> u32 {
    let max_norm = sites.iter().map(|s| s.norm).max().unwrap_or(0);
    let lhs = BigInt::from(16u64) * g * g * max_norm;
    let ell2 = BigInt::from(ell) * ell;
    let mut n = 1;
    let mut pow = ell2.clone();
    while pow <= lhs {
        pow *= &ell2;
        n += 1;
    }
    n
}

/// The integer a with |a| ≤ bound and a ≡ residue (mod ℓᴺ), if any. Requires ℓᴺ > 2·bound.
pub fn unique_weil_lift(residue: &ResidueInt, bound: &BigInt) -> Result<Option<BigInt>> {
    let m = num_traits::pow(BigInt::from(residue.ell), residue.n as usize);
    if m <= bound * 2 {
        return Err(Error::AmbiguousRegime {
            modulus: m.to_string(),
            bound: bound.to_string(),
        });
    }
    let r = residue.value.mod_floor(&m);
    if &r <= bound {
        return Ok(Some(r));
    }
    let s = &r - &m;
    Ok((-&s <= *bound).then_some(s))
}

/// ((14g)^{64g²}·D·max(h, log D, 1)²)^{2¹⁰g³}, rounded up.
///
/// Exact when the maximum is h or 1; when log D wins the value is evaluated with enough
/// precision to fix the integer part and then rounded up.
pub fn isogeny_degree_bound(g: u64, degree: u64, height: &BigRat) -> Result<BigInt> {
    if g == 0 || degree == 0 {
        return Err(Error::InvalidInput("g and [K:ℚ] must be positive".into()));
    }
    let outer = 1024 * g.pow(3);
    let base = num_traits::pow(BigInt::from(14 * g), (64 * g * g) as usize) * degree;
    let log_d = (degree as f64).ln();
    let h_f = height.to_f64().unwrap_or(f64::INFINITY);
    let one = BigRat::one();
    let exact_max = if height > &one { height.clone() } else { one };
    let log_wins = degree > 2 && log_d > h_f.max(1.0) && (log_d - h_f.max(1.0)).abs() > 1e-9;
    if !log_wins {
        let inner = BigRat::from_integer(base) * &exact_max * &exact_max;
        let v = num_traits::pow(inner, outer as usize);
        return Ok(ceil_rat(&v));
    }
    // bits of the result, plus a margin for the fractional part
    let bits = (outer as f64 * ((base.bits() as f64) + 2.0 * log_d.log2().max(1.0))) as u32 + 128;
    let ln_d = Float::with_val(bits, degree).ln();
    let base_int = rug::Integer::from_str_radix(&base.to_str_radix(16), 16).expect("hex integer");
    let inner = Float::with_val(bits, &base_int) * ln_d.clone() * ln_d;
    let v = Float::with_val(bits, inner.pow(outer as u32));
    let i = v.ceil().to_integer().expect("finite");
    Ok(BigInt::parse_bytes(i.to_string_radix(16).as_bytes(), 16).expect("hex integer"))
}

fn ceil_rat(r: &BigRat) -> BigInt {
    let (q, rem) = r.numer().div_mod_floor(r.denom());
    if rem.is_zero() {
        q
    } else {
        q + 1
    }
}

/// Whether every pair of trace tables agreeing on `classes` agrees on all classes either lists.
pub fn determines_traces_check<L: Ord + Clone, V: PartialEq>(
    classes: &[L],
    reps: &[BTreeMap<L, V>],
) -> bool {
    for (i, r) in reps.iter().enumerate() {
        for s in &reps[i + 1..] {
            let agree_on_t = classes.iter().all(|c| r.get(c) == s.get(c));
            if agree_on_t && !(r.keys().chain(s.keys()).all(|c| r.get(c) == s.get(c))) {
                return false;
            }
        }
    }
    true
}

/// Number of decimal digits of |n|.
pub fn decimal_digits(n: &BigInt) -> usize {
    n.abs().to_string().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::residue::ResidueRing;

    fn site(n: u64) -> PrimeSite {
        PrimeSite::new(format!("p{n}"), n).unwrap()
    }

    #[test]
    fn candidate_examples() {
        assert_eq!(
            weil_candidates(&[site(5)], 1, CANDIDATE_BUDGET)
                .unwrap()
                .len(),
            9
        );
        assert_eq!(
            weil_candidates(&[site(2)], 1, CANDIDATE_BUDGET)
                .unwrap()
                .len(),
            5
        );
        let empty = weil_candidates(&[], 1, CANDIDATE_BUDGET).unwrap();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].traces.is_empty());
        assert!(matches!(
            weil_candidates(&vec![site(5); 3], 1, 100),
            Err(Error::CandidateSetTooLarge(_))
        ));
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(precision_threshold(&[site(5)], 1, 3), 2);
        assert_eq!(precision_threshold(&[], 1, 5), 1);
        assert!(precision_threshold(&[site(97)], 2, 3) >= precision_threshold(&[site(97)], 1, 3));
    }

    #[test]
    fn lift_examples() {
        let r = ResidueRing::new(3, 3).unwrap();
        let four = BigInt::from(4);
        assert_eq!(
            unique_weil_lift(&r.elem(&BigInt::from(25)), &four).unwrap(),
            Some(BigInt::from(-2))
        );
        assert_eq!(
            unique_weil_lift(&r.elem(&BigInt::from(7)), &four).unwrap(),
            None
        );
        assert_eq!(
            unique_weil_lift(&r.zero(), &BigInt::from(13)).unwrap(),
            Some(BigInt::zero())
        );
        assert!(matches!(
            unique_weil_lift(&r.zero(), &BigInt::from(14)),
            Err(Error::AmbiguousRegime { .. })
        ));
    }

    #[test]
    fn determines_traces_examples() {
        let t = vec!["a", "b"];
        let r1: BTreeMap<&str, i64> = [("a", 1), ("b", 2), ("c", 3)].into();
        let r2: BTreeMap<&str, i64> = [("a", 1), ("b", 2), ("c", 4)].into();
        assert!(determines_traces_check(
            &["a", "b", "c"],
            &[r1.clone(), r2.clone()]
        ));
        assert!(!determines_traces_check(&t, &[r1, r2]));
        assert!(determines_traces_check::<&str, i64>(&t, &[]));
    }
}
