//! Oracle interfaces standing in for the infeasible subroutines of the search loops.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::weil::{PrimeSite, TraceCandidate};
use crate::error::Result;
use crate::exact::residue::ResidueInt;

/// Input to a lift attempt: a candidate on T, the extended site set T̃ and the precision N.
#[derive(Clone, Debug)]
pub struct LiftRequest<'a> {
    pub g: u64,
    pub ell: u64,
    pub n: u32,
    pub sites: &'a [PrimeSite],
    pub extended: &'a [PrimeSite],
    pub candidate: &'a TraceCandidate,
    pub seed: u64,
}

/// A synthetic abelian variety produced by the enumeration oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Descriptor {
    pub label: String,
    pub dim: u64,
    /// Frobenius traces by site label.
    pub traces: BTreeMap<String, i64>,
    /// Matrix sizes of the simple factors of End⁰, used for the k-th power test.
    #[serde(default)]
    pub endomorphism_sizes: Vec<u64>,
}

/// A member of an output isogeny class, with the degree of its polarization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolarizedVariety {
    pub label: String,
    pub degree: u64,
}

/// Residues mod ℓᴺ of the traces on T̃ extending the candidate, or None when no lift exists.
pub trait LiftOracle: Sync {
    fn lift(&self, req: &LiftRequest) -> Result<Option<BTreeMap<String, ResidueInt>>>;
    /// Pure oracles may be called concurrently across candidates.
    fn is_pure(&self) -> bool {
        false
    }
}

/// The brute-force search at parameter H for varieties of dimension at most `max_dim`.
pub trait EnumOracle: Sync {
    fn enumerate(&self, h: u64, max_dim: u64, seed: u64) -> Result<Vec<Descriptor>>;
}

/// Polarized varieties of degree d isogenous to B, where A ~ B^k.
pub trait IsogenyOracle: Sync {
    fn isogeny_class(
        &self,
        a: &Descriptor,
        k: u64,
        d: u64,
        seed: u64,
    ) -> Result<Vec<PolarizedVariety>>;
}

pub struct OracleSuite<'a> {
    pub lift: &'a dyn LiftOracle,
    pub enumerate: &'a dyn EnumOracle,
    pub isogeny: &'a dyn IsogenyOracle,
}

/// A point of the parameter curve, flagged rational or not.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParameterPoint {
    pub label: String,
    #[serde(default)]
    pub coords: Vec<String>,
    pub rational: bool,
}

pub trait FamilyOracle {
    /// Polarizations of degree d on A, by label.
    fn polarizations(&self, a: &PolarizedVariety, d: u64) -> Result<Vec<String>>;
    /// Points s of the curve that might carry a fibre isomorphic to A.
    fn candidate_points(&self, a: &PolarizedVariety) -> Result<Vec<ParameterPoint>>;
}

/// Whether the fibre over s is isomorphic to (A, polarization) over the algebraic closure.
pub trait FiberMatcher {
    fn matches(&self, a: &PolarizedVariety, polarization: &str, s: &ParameterPoint)
        -> Result<bool>;
}
