//! The Shafarevich search loop over pluggable oracles.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oracle::{Descriptor, LiftRequest, OracleSuite, PolarizedVariety};
use super::weil::{
    precision_threshold, unique_weil_lift, weil_bound, weil_candidates, CandidateState, PrimeSite,
    TraceCandidate, CANDIDATE_BUDGET,
};
use crate::error::{Error, Result};
use crate::exact::rational::is_prime_u64;
use crate::global::invariants::sizes_divisible;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub g: u64,
    pub ell: u64,
    /// Polarization degree of the output varieties.
    pub d: Option<u64>,
    /// The set T on which candidates live.
    pub sites: Vec<PrimeSite>,
    /// Additional sites needed for rank k·g, for k = 1, 2, ...; T̃ is T plus the first k_max lists.
    #[serde(default)]
    pub extended_sites: Vec<Vec<PrimeSite>>,
    /// Norms of the primes of bad reduction S.
    #[serde(default)]
    pub bad_norms: Vec<u64>,
    pub max_iterations: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub candidate_budget: Option<u128>,
}

impl EngineConfig {
    pub fn validate(&self) -> Result<u64> {
        let Some(d) = self.d else {
            return Err(Error::IncompleteInput(vec!["d".into()]));
        };
        if self.g == 0 || d == 0 {
            return Err(Error::InvalidInput("g and d must be positive".into()));
        }
        if !is_prime_u64(self.ell) {
            return Err(Error::InvalidInput(format!(
                "ℓ = {} is not prime",
                self.ell
            )));
        }
        let all_sites = self
            .sites
            .iter()
            .chain(self.extended_sites.iter().flatten());
        if let Some(s) = all_sites.clone().find(|s| s.norm < 2) {
            return Err(Error::InvalidInput(format!(
                "site {} has norm {}",
                s.label, s.norm
            )));
        }
        let norms = all_sites
            .map(|s| s.norm)
            .chain(self.bad_norms.iter().copied());
        if let Some(n) = norms.into_iter().find(|n| n % self.ell == 0) {
            return Err(Error::InvalidInput(format!(
                "ℓ = {} divides the norm {n}",
                self.ell
            )));
        }
        Ok(d)
    }

    /// T together with the extra sites for every k ≤ k_max, deduplicated by label.
    pub fn extended(&self, k_max: u64) -> Vec<PrimeSite> {
        let mut seen = BTreeSet::new();
        let extra = self.extended_sites.iter().take(k_max as usize).flatten();
        self.sites
            .iter()
            .chain(extra)
            .filter(|s| seen.insert(s.label.clone()))
            .cloned()
            .collect()
    }
}

/// One line of the trace log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub iteration: u64,
    pub action: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate: Option<BTreeMap<String, i64>>,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "H")]
    pub h: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<String>,
    /// The matched extended tuple on T̃.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuple: Option<BTreeMap<String, i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunVerdict {
    Completed,
    /// The iteration cap was reached with candidates still active.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShafarevichRun {
    pub verdict: RunVerdict,
    pub iterations: u64,
    pub output: Vec<PolarizedVariety>,
    pub candidates: Vec<TraceCandidate>,
    pub log: Vec<TraceEvent>,
}

/// Calls the oracle twice and insists on identical answers.
fn replayed<T: PartialEq>(what: &str, call: impl Fn() -> Result<T>) -> Result<T> {
    let first = call()?;
    if call()? != first {
        return Err(Error::OracleContractViolation(format!(
            "{what} oracle gave different answers on replay"
        )));
    }
    Ok(first)
}

struct Logger {
    events: Vec<TraceEvent>,
    iteration: u64,
    n: u32,
    h: u64,
}

impl Logger {
    fn push(
        &mut self,
        action: &str,
        candidate: Option<&TraceCandidate>,
        descriptor: Option<&str>,
        tuple: Option<&BTreeMap<String, i64>>,
        detail: Option<String>,
    ) {
        self.events.push(TraceEvent {
            iteration: self.iteration,
            action: action.into(),
            candidate: candidate.map(|c| c.traces.clone()),
            n: self.n,
            h: self.h,
            descriptor: descriptor.map(str::to_string),
            tuple: tuple.cloned(),
            detail,
        });
    }
}

fn congruent(x: i64, y: i64, modulus: &BigInt) -> bool {
    (BigInt::from(x) - BigInt::from(y)).mod_floor(modulus) == BigInt::from(0)
}

/// tr_A(𝔭) ≡ (dim A / g)·a_𝔭 (mod ℓᴺ) on every listed site.
fn scaled_match(
    a: &Descriptor,
    k: u64,
    tuple: &BTreeMap<String, i64>,
    sites: &[PrimeSite],
    modulus: &BigInt,
) -> bool {
    sites
        .iter()
        .all(|s| congruent(a.traces[&s.label], k as i64 * tuple[&s.label], modulus))
}

/// Runs the loop until no candidate is active or `max_iterations` passes have been made.
pub fn run_shafarevich(cfg: &EngineConfig, oracles: &OracleSuite) -> Result<ShafarevichRun> {
    let d = cfg.validate()?;
    let g = cfg.g;
    let mut cands = weil_candidates(
        &cfg.sites,
        g,
        cfg.candidate_budget.unwrap_or(CANDIDATE_BUDGET),
    )?;
    let mut log = Logger {
        events: Vec::new(),
        iteration: 0,
        n: 1,
        h: 1,
    };
    log.push(
        "start",
        None,
        None,
        None,
        Some(format!(
            "g={g} ell={} d={d} candidates={}",
            cfg.ell,
            cands.len()
        )),
    );
    let mut output: BTreeSet<PolarizedVariety> = BTreeSet::new();
    let mut k_max = 1u64;

    while cands.iter().any(|c| c.state == CandidateState::Active) {
        if log.iteration == cfg.max_iterations {
            log.push(
                "inconclusive",
                None,
                None,
                None,
                Some(format!("max_iterations = {}", cfg.max_iterations)),
            );
            return Ok(ShafarevichRun {
                verdict: RunVerdict::Inconclusive,
                iterations: log.iteration,
                output: output.into_iter().collect(),
                candidates: cands,
                log: log.events,
            });
        }
        log.iteration += 1;
        k_max += 1;
        log.h += 1;
        log.n += 1;
        let tt = cfg.extended(k_max);
        log.n = log.n.max(precision_threshold(&tt, g, cfg.ell));
        let modulus = num_traits::pow(BigInt::from(cfg.ell), log.n as usize);
        log.push(
            "increment",
            None,
            None,
            None,
            Some(format!("k_max={k_max} sites={}", tt.len())),
        );

        // lift each active candidate to an integer tuple on T̃
        let active: Vec<usize> = (0..cands.len())
            .filter(|&i| cands[i].state == CandidateState::Active)
            .collect();
        let call = |i: usize| {
            let req = LiftRequest {
                g,
                ell: cfg.ell,
                n: log.n,
                sites: &cfg.sites,
                extended: &tt,
                candidate: &cands[i],
                seed: cfg.seed,
            };
            replayed("lift", || oracles.lift.lift(&req))
        };
        let lifted: Vec<_> = if oracles.lift.is_pure() {
            active.par_iter().map(|&i| call(i)).collect()
        } else {
            active.iter().map(|&i| call(i)).collect()
        };
        let mut c_n: Vec<(usize, BTreeMap<String, i64>)> = Vec::new();
        for (&i, res) in active.iter().zip(lifted) {
            let Some(res) = res? else {
                cands[i].state = CandidateState::RemovedByLiftFailure;
                log.push("lift-failed", Some(&cands[i]), None, None, None);
                continue;
            };
            let mut tuple = BTreeMap::new();
            for s in &tt {
                let r = res.get(&s.label).ok_or_else(|| {
                    Error::OracleContractViolation(format!("lift omits site {}", s.label))
                })?;
                if r.ell != cfg.ell || r.n != log.n {
                    return Err(Error::OracleContractViolation(format!(
                        "lift residue at {} is not modulo ℓ^N",
                        s.label
                    )));
                }
                match unique_weil_lift(r, &BigInt::from(weil_bound(g, s.norm)))? {
                    Some(a) => {
                        tuple.insert(
                            s.label.clone(),
                            a.to_i64().expect("bounded by the Weil bound"),
                        );
                    }
                    None => break,
                }
            }
            if tuple.len() < tt.len() {
                cands[i].state = CandidateState::RemovedByLiftFailure;
                log.push("lift-outside-weil-bound", Some(&cands[i]), None, None, None);
                continue;
            }
            if cfg
                .sites
                .iter()
                .any(|s| tuple[&s.label] != cands[i].traces[&s.label])
            {
                return Err(Error::OracleContractViolation(
                    "lift does not extend the candidate".into(),
                ));
            }
            log.push("lift", Some(&cands[i]), None, Some(&tuple), None);
            c_n.push((i, tuple));
        }

        // brute-force search at parameter H
        let descs = replayed("enumeration", || {
            oracles.enumerate.enumerate(log.h, k_max * g, cfg.seed)
        })?;
        log.push(
            "enumerate",
            None,
            None,
            None,
            Some(format!("{} descriptors", descs.len())),
        );
        for a in &descs {
            if a.dim == 0 || a.dim % g != 0 || a.dim > k_max * g {
                log.push(
                    "skip-dimension",
                    None,
                    Some(&a.label),
                    None,
                    Some(format!("dim={}", a.dim)),
                );
                continue;
            }
            if let Some(s) = tt.iter().find(|s| !a.traces.contains_key(&s.label)) {
                return Err(Error::OracleContractViolation(format!(
                    "descriptor {} lacks a trace at {}",
                    a.label, s.label
                )));
            }
            let k = a.dim / g;
            let matches: Vec<&(usize, BTreeMap<String, i64>)> = c_n
                .iter()
                .filter(|(_, t)| scaled_match(a, k, t, &tt, &modulus))
                .collect();
            let (i, tuple) = match matches.as_slice() {
                [one] => (one.0, &one.1),
                [] => {
                    let explained = cands.iter().any(|c| {
                        c.state == CandidateState::Resolved
                            && scaled_match(a, k, &c.traces, &cfg.sites, &modulus)
                    });
                    if explained {
                        log.push("already-resolved", None, Some(&a.label), None, None);
                        continue;
                    }
                    return Err(Error::OracleContractViolation(format!(
                        "descriptor {} matches no candidate tuple",
                        a.label
                    )));
                }
                _ => {
                    return Err(Error::OracleContractViolation(format!(
                        "descriptor {} matches {} candidate tuples",
                        a.label,
                        matches.len()
                    )))
                }
            };
            log.push(
                "match",
                Some(&cands[i]),
                Some(&a.label),
                Some(tuple),
                Some(format!("k={k}")),
            );
            let kth = sizes_divisible(&a.endomorphism_sizes, k);
            log.push(
                "kth-power",
                Some(&cands[i]),
                Some(&a.label),
                None,
                Some(kth.to_string()),
            );
            if kth {
                let class = replayed("isogeny", || {
                    oracles.isogeny.isogeny_class(a, k, d, cfg.seed)
                })?;
                log.push(
                    "resolve",
                    Some(&cands[i]),
                    Some(&a.label),
                    None,
                    Some(format!("{} varieties", class.len())),
                );
                output.extend(class);
            }
            if cands[i].state == CandidateState::Active {
                cands[i].state = CandidateState::Resolved;
                log.push("remove", Some(&cands[i]), Some(&a.label), None, None);
            }
        }
    }
    log.push(
        "done",
        None,
        None,
        None,
        Some(format!("{} varieties", output.len())),
    );
    Ok(ShafarevichRun {
        verdict: RunVerdict::Completed,
        iterations: log.iteration,
        output: output.into_iter().collect(),
        candidates: cands,
        log: log.events,
    })
}
