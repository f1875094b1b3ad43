//! The Mordell loop: fibres of a family over the varieties found by the Shafarevich search.

use std::collections::BTreeSet;

use super::oracle::{FamilyOracle, FiberMatcher, ParameterPoint, PolarizedVariety};
use super::shafarevich::EngineConfig;
use crate::error::Result;

/// Rational points s whose fibre is isomorphic to some polarized member of `sigma`, deduplicated by label.
pub fn run_mordell(
    cfg: &EngineConfig,
    family: &dyn FamilyOracle,
    sigma: &[PolarizedVariety],
    matcher: &dyn FiberMatcher,
) -> Result<Vec<ParameterPoint>> {
    let d = cfg.validate()?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in sigma {
        let points = family.candidate_points(a)?;
        for pol in family.polarizations(a, d)? {
            for s in &points {
                if matcher.matches(a, &pol, s)? && s.rational && seen.insert(s.label.clone()) {
                    out.push(s.clone());
                }
            }
        }
    }
    Ok(out)
}
