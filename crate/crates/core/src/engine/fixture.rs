//! Table-driven oracles loaded from JSON, for simulations and tests.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::oracle::{
    Descriptor, EnumOracle, FamilyOracle, FiberMatcher, IsogenyOracle, LiftOracle, LiftRequest,
    ParameterPoint, PolarizedVariety,
};
use crate::error::Result;
use crate::exact::residue::{ResidueInt, ResidueRing};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftTable {
    /// Every lift fails once N reaches this value.
    #[serde(default)]
    pub fail_from_n: Option<u32>,
    /// Candidates (traces on T) that never lift.
    #[serde(default)]
    pub fail_candidates: Vec<BTreeMap<String, i64>>,
    /// Trace values on sites outside T; missing sites get 0.
    #[serde(default)]
    pub extension: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduledDescriptor {
    #[serde(flatten)]
    pub descriptor: Descriptor,
    /// First search parameter H at which the descriptor is found.
    pub first_h: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberEntry {
    pub variety: String,
    pub polarization: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduledPoint {
    #[serde(flatten)]
    pub point: ParameterPoint,
    /// Polarized varieties isomorphic to the fibre over this point.
    #[serde(default)]
    pub fibers: Vec<FiberEntry>,
}

/// Every oracle of both loops, answered from fixed tables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureOracles {
    #[serde(default)]
    pub lift: LiftTable,
    #[serde(default)]
    pub descriptors: Vec<ScheduledDescriptor>,
    /// Permute the enumeration order by (seed, H).
    #[serde(default)]
    pub shuffle: bool,
    /// Isogeny classes by descriptor label; a missing label yields the descriptor itself with degree d.
    #[serde(default)]
    pub isogeny_classes: BTreeMap<String, Vec<PolarizedVariety>>,
    #[serde(default)]
    pub polarizations: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub points: Vec<ScheduledPoint>,
}

impl FixtureOracles {
    pub fn from_json(s: &str) -> Result<FixtureOracles> {
        serde_json::from_str(s)
            .map_err(|e| crate::error::Error::InvalidInput(format!("oracle fixture: {e}")))
    }
}

impl LiftOracle for FixtureOracles {
    fn lift(&self, req: &LiftRequest) -> Result<Option<BTreeMap<String, ResidueInt>>> {
        if self.lift.fail_from_n.is_some_and(|n| req.n >= n)
            || self.lift.fail_candidates.contains(&req.candidate.traces)
        {
            return Ok(None);
        }
        let ring = ResidueRing::new(req.ell, req.n)?;
        let out = req
            .extended
            .iter()
            .map(|s| {
                let v = req
                    .candidate
                    .traces
                    .get(&s.label)
                    .or_else(|| self.lift.extension.get(&s.label))
                    .copied()
                    .unwrap_or(0);
                (s.label.clone(), ring.elem(&BigInt::from(v)))
            })
            .collect();
        Ok(Some(out))
    }

    fn is_pure(&self) -> bool {
        true
    }
}

impl EnumOracle for FixtureOracles {
    fn enumerate(&self, h: u64, max_dim: u64, seed: u64) -> Result<Vec<Descriptor>> {
        let mut out: Vec<Descriptor> = self
            .descriptors
            .iter()
            .filter(|d| d.first_h <= h && d.descriptor.dim <= max_dim)
            .map(|d| d.descriptor.clone())
            .collect();
        if self.shuffle {
            out.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ h.rotate_left(32)));
        }
        Ok(out)
    }
}

impl IsogenyOracle for FixtureOracles {
    fn isogeny_class(
        &self,
        a: &Descriptor,
        _k: u64,
        d: u64,
        _seed: u64,
    ) -> Result<Vec<PolarizedVariety>> {
        Ok(self
            .isogeny_classes
            .get(&a.label)
            .cloned()
            .unwrap_or_else(|| {
                vec![PolarizedVariety {
                    label: a.label.clone(),
                    degree: d,
                }]
            }))
    }
}

impl FamilyOracle for FixtureOracles {
    fn polarizations(&self, a: &PolarizedVariety, _d: u64) -> Result<Vec<String>> {
        Ok(self
            .polarizations
            .get(&a.label)
            .cloned()
            .unwrap_or_default())
    }

    fn candidate_points(&self, a: &PolarizedVariety) -> Result<Vec<ParameterPoint>> {
        Ok(self
            .points
            .iter()
            .filter(|p| p.fibers.iter().any(|f| f.variety == a.label))
            .map(|p| p.point.clone())
            .collect())
    }
}

impl FiberMatcher for FixtureOracles {
    fn matches(
        &self,
        a: &PolarizedVariety,
        polarization: &str,
        s: &ParameterPoint,
    ) -> Result<bool> {
        Ok(self.points.iter().any(|p| {
            p.point == *s
                && p.fibers
                    .iter()
                    .any(|f| f.variety == a.label && f.polarization == polarization)
        }))
    }
}
