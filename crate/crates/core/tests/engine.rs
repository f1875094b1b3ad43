use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use toolkit_core::engine::*;
use toolkit_core::exact::residue::ResidueRing;
use toolkit_core::{BigRat, Error};

fn site(label: &str, norm: u64) -> PrimeSite {
    PrimeSite::new(label, norm).unwrap()
}

fn cfg(
    sites: Vec<PrimeSite>,
    extended: Vec<Vec<PrimeSite>>,
    max_iterations: u64,
    seed: u64,
) -> EngineConfig {
    EngineConfig {
        g: 1,
        ell: 3,
        d: Some(1),
        sites,
        extended_sites: extended,
        bad_norms: vec![2],
        max_iterations,
        seed,
        candidate_budget: None,
    }
}

fn fixture(v: serde_json::Value) -> FixtureOracles {
    FixtureOracles::from_json(&v.to_string()).unwrap()
}

fn run(c: &EngineConfig, f: &FixtureOracles) -> toolkit_core::Result<ShafarevichRun> {
    run_shafarevich(
        c,
        &OracleSuite {
            lift: f,
            enumerate: f,
            isogeny: f,
        },
    )
}

#[test]
fn terminates_with_isogeny_closure() {
    let c = cfg(vec![], vec![vec![site("q7", 7)]], 20, 0);
    let f = fixture(json!({
        "lift": {"extension": {"q7": 3}},
        "descriptors": [{"label": "E", "dim": 1, "traces": {"q7": 3}, "endomorphism_sizes": [1], "first_h": 3}],
        "isogeny_classes": {"E": [{"label": "E", "degree": 1}, {"label": "E'", "degree": 1}]}
    }));
    let r = run(&c, &f).unwrap();
    assert_eq!(r.verdict, RunVerdict::Completed);
    assert_eq!(r.iterations, 2);
    let labels: Vec<&str> = r.output.iter().map(|v| v.label.as_str()).collect();
    assert_eq!(labels, ["E", "E'"]);
    assert_eq!(r.candidates[0].state, CandidateState::Resolved);
    assert!(r.log.iter().any(|e| e.action == "resolve" && e.h == 3));
}

#[test]
fn lift_failure_at_two_empties_everything() {
    let c = cfg(vec![site("p5", 5), site("p7", 7)], vec![], 20, 0);
    let f = fixture(json!({"lift": {"fail_from_n": 2}}));
    let r = run(&c, &f).unwrap();
    assert_eq!(r.verdict, RunVerdict::Completed);
    assert!(r.output.is_empty());
    assert_eq!(r.candidates.len(), 9 * 11);
    assert!(r
        .candidates
        .iter()
        .all(|c| c.state == CandidateState::RemovedByLiftFailure));
}

#[test]
fn never_matching_is_inconclusive() {
    let c = cfg(vec![site("p5", 5)], vec![], 7, 0);
    let r = run(&c, &fixture(json!({}))).unwrap();
    assert_eq!(r.verdict, RunVerdict::Inconclusive);
    assert_eq!(r.iterations, 7);
    assert!(r
        .candidates
        .iter()
        .all(|c| c.state == CandidateState::Active));
    assert_eq!(r.log.last().unwrap().action, "inconclusive");
}

fn rich_scenario(seed: u64) -> (EngineConfig, FixtureOracles) {
    let c = cfg(
        vec![site("p5", 5)],
        vec![vec![site("q7", 7)], vec![site("q11", 11)]],
        30,
        seed,
    );
    // candidates a = 1 and a = -2 are found by varieties of dimension 1 and 2; a = 4 never lifts
    let f = fixture(json!({
        "lift": {"fail_candidates": [{"p5": 4}], "extension": {"q7": 0, "q11": 0}},
        "shuffle": true,
        "descriptors": [
            {"label": "E1", "dim": 1, "traces": {"p5": 1, "q7": 0, "q11": 0}, "endomorphism_sizes": [1], "first_h": 2},
            {"label": "A2", "dim": 2, "traces": {"p5": -4, "q7": 0, "q11": 0}, "endomorphism_sizes": [2], "first_h": 4},
            {"label": "B2", "dim": 2, "traces": {"p5": 0, "q7": 0, "q11": 0}, "endomorphism_sizes": [1, 1], "first_h": 5},
            {"label": "E0", "dim": 1, "traces": {"p5": 0, "q7": 0, "q11": 0}, "endomorphism_sizes": [1], "first_h": 5}
        ]
    }));
    (c, f)
}

#[test]
fn replay_identical_over_seeds() {
    for seed in 0..10 {
        let (c, f) = rich_scenario(seed);
        let a = run(&c, &f).unwrap();
        let b = run(&c, &f).unwrap();
        assert_eq!(a, b, "seed {seed}");
        assert_eq!(
            serde_json::to_string(&a.log).unwrap(),
            serde_json::to_string(&b.log).unwrap()
        );
    }
}

#[test]
fn rich_scenario_semantics() {
    let (c, f) = rich_scenario(3);
    let r = run(&c, &f).unwrap();
    assert_eq!(r.verdict, RunVerdict::Inconclusive);
    let state = |a: i64| {
        r.candidates
            .iter()
            .find(|c| c.traces["p5"] == a)
            .unwrap()
            .state
    };
    assert_eq!(state(1), CandidateState::Resolved);
    assert_eq!(state(-2), CandidateState::Resolved);
    assert_eq!(state(0), CandidateState::Resolved);
    assert_eq!(state(4), CandidateState::RemovedByLiftFailure);
    assert_eq!(state(3), CandidateState::Active);
    // B2 ~ B^2 fails the square test, so only E1, A2 and E0 contribute
    let labels: Vec<&str> = r.output.iter().map(|v| v.label.as_str()).collect();
    assert_eq!(labels, ["A2", "E0", "E1"]);
}

/// Active sets per iteration, read back from the log.
fn active_sets(r: &ShafarevichRun, initial: usize) -> Vec<usize> {
    let mut active = initial;
    let mut out = vec![active];
    let mut last_iter = 0;
    for e in &r.log {
        if e.iteration != last_iter {
            out.push(active);
            last_iter = e.iteration;
        }
        if matches!(
            e.action.as_str(),
            "lift-failed" | "lift-outside-weil-bound" | "remove"
        ) {
            active -= 1;
        }
    }
    out.push(active);
    out
}

#[test]
fn active_set_only_shrinks_and_matches_are_congruent() {
    for seed in 0..10 {
        let (c, f) = rich_scenario(seed);
        let r = run(&c, &f).unwrap();
        let sizes = active_sets(&r, r.candidates.len());
        assert!(sizes.windows(2).all(|w| w[1] <= w[0]));
        let still = r
            .candidates
            .iter()
            .filter(|c| c.state == CandidateState::Active)
            .count();
        assert_eq!(*sizes.last().unwrap(), still);
        let descs: BTreeMap<String, Descriptor> = f
            .descriptors
            .iter()
            .map(|d| (d.descriptor.label.clone(), d.descriptor.clone()))
            .collect();
        let mut matched = 0;
        for e in r.log.iter().filter(|e| e.action == "match") {
            let a = &descs[e.descriptor.as_ref().unwrap()];
            let tuple = e.tuple.as_ref().unwrap();
            let m = BigInt::from(3u64).pow(e.n);
            for (label, t) in tuple {
                let diff = BigInt::from(a.traces[label] - (a.dim as i64) * t);
                assert_eq!(diff % &m, BigInt::from(0), "{label} at N={}", e.n);
            }
            let cand = e.candidate.as_ref().unwrap();
            assert!(cand.iter().all(|(k, v)| tuple[k] == *v));
            matched += 1;
        }
        assert_eq!(matched, 4);
    }
}

struct Flaky(AtomicU64);

impl LiftOracle for Flaky {
    fn lift(
        &self,
        req: &LiftRequest,
    ) -> toolkit_core::Result<Option<BTreeMap<String, toolkit_core::exact::residue::ResidueInt>>>
    {
        let ring = ResidueRing::new(req.ell, req.n)?;
        let k = self.0.fetch_add(1, Ordering::SeqCst) as i64;
        Ok(Some(
            req.extended
                .iter()
                .map(|s| {
                    (
                        s.label.clone(),
                        ring.elem(&BigInt::from(
                            req.candidate.traces.get(&s.label).copied().unwrap_or(k),
                        )),
                    )
                })
                .collect(),
        ))
    }
}

#[test]
fn nondeterministic_oracle_is_rejected() {
    let c = cfg(vec![site("p5", 5)], vec![vec![site("q7", 7)]], 5, 0);
    let flaky = Flaky(AtomicU64::new(0));
    let f = fixture(json!({}));
    let r = run_shafarevich(
        &c,
        &OracleSuite {
            lift: &flaky,
            enumerate: &f,
            isogeny: &f,
        },
    );
    assert!(matches!(r, Err(Error::OracleContractViolation(_))));
}

#[test]
fn ambiguous_or_unexplained_matches_are_rejected() {
    let c = cfg(vec![site("p5", 5)], vec![], 5, 0);
    // trace 0 at N = 2 can only come from the candidate that failed to lift
    let orphan = fixture(json!({
        "lift": {"fail_candidates": [{"p5": 0}]},
        "descriptors": [{"label": "X", "dim": 1, "traces": {"p5": 0}, "first_h": 2}]
    }));
    assert!(matches!(
        run(&c, &orphan),
        Err(Error::OracleContractViolation(_))
    ));
    // 2a ≡ 8 (mod 16) is solved by both a = 4 and a = -4
    let c2 = EngineConfig {
        ell: 2,
        bad_norms: vec![],
        ..cfg(vec![site("p5", 5)], vec![], 5, 0)
    };
    let multi = fixture(
        json!({"descriptors": [{"label": "Y", "dim": 2, "traces": {"p5": 8}, "first_h": 2}]}),
    );
    assert!(matches!(
        run(&c2, &multi),
        Err(Error::OracleContractViolation(_))
    ));
}

#[test]
fn config_validation() {
    let mut c = cfg(vec![site("p5", 5)], vec![], 5, 0);
    c.d = None;
    assert!(matches!(run(&c, &fixture(json!({}))), Err(Error::IncompleteInput(v)) if v == ["d"]));
    let c = cfg(vec![site("p3", 3)], vec![], 5, 0);
    assert!(matches!(
        run(&c, &fixture(json!({}))),
        Err(Error::InvalidInput(_))
    ));
    let c = EngineConfig {
        bad_norms: vec![6],
        ..cfg(vec![], vec![], 5, 0)
    };
    assert!(matches!(
        run(&c, &fixture(json!({}))),
        Err(Error::InvalidInput(_))
    ));
    let c = EngineConfig {
        ell: 4,
        ..cfg(vec![], vec![], 5, 0)
    };
    assert!(matches!(
        run(&c, &fixture(json!({}))),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn weil_counts_match_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.gen_range(0..4);
        let g = rng.gen_range(1..3);
        let sites: Vec<PrimeSite> = (0..n)
            .map(|i| site(&format!("s{i}"), rng.gen_range(2..60)))
            .collect();
        // count |a| ≤ 2g√N by scanning a² ≤ 4g²N
        let expected: usize = sites
            .iter()
            .map(|s| {
                (-200i64..=200)
                    .filter(|a| (a * a) as u64 <= 4 * g * g * s.norm)
                    .count()
            })
            .product();
        let cands = weil_candidates(&sites, g, CANDIDATE_BUDGET).unwrap();
        assert_eq!(cands.len(), expected);
        assert_eq!(weil_candidate_count(&sites, g), expected as u128);
        for c in cands.iter().step_by(7) {
            for s in &sites {
                let a = c.traces[&s.label];
                assert!((a * a) as u64 <= 4 * g * g * s.norm);
            }
        }
    }
}

#[test]
fn unique_lift_matches_exhaustive_scan() {
    for ell in [2u64, 3, 5, 7, 11, 13] {
        for n in 1..=13u32 {
            let m = ell.pow(n);
            if m > 10_000 {
                break;
            }
            let ring = ResidueRing::new(ell, n).unwrap();
            for bound in [0i64, 1, 2, 3, 5, 8, 13, 40, 100, 1000] {
                for r in (0..m as i64).step_by((m as usize / 200).max(1)) {
                    let got = unique_weil_lift(&ring.elem(&BigInt::from(r)), &BigInt::from(bound));
                    if m as i64 <= 2 * bound {
                        assert!(matches!(got, Err(Error::AmbiguousRegime { .. })));
                        continue;
                    }
                    let scan: Vec<i64> = (-bound..=bound)
                        .filter(|a| (a - r).rem_euclid(m as i64) == 0)
                        .collect();
                    assert!(scan.len() <= 1);
                    assert_eq!(
                        got.unwrap(),
                        scan.first().map(|&a| BigInt::from(a)),
                        "ell={ell} n={n} r={r} bound={bound}"
                    );
                }
            }
        }
    }
}

#[test]
fn precision_threshold_is_least() {
    for ell in [3u64, 5, 7] {
        for g in 1..4u64 {
            for norm in [2u64, 5, 13, 97, 1009] {
                let n = precision_threshold(&[site("p", norm)], g, ell);
                let ok =
                    |n: u32| (norm as u128) * 16 * ((g * g) as u128) < (ell as u128).pow(2 * n);
                assert!(ok(n));
                assert!(n == 1 || !ok(n - 1));
            }
        }
    }
}

#[test]
fn isogeny_bound_digit_count() {
    let k = isogeny_degree_bound(1, 1, &BigRat::from_integer(1.into())).unwrap();
    assert_eq!(k, BigInt::from(14).pow(65536));
    let expected = (65536.0 * 14f64.log10()).floor() as usize + 1;
    assert_eq!(decimal_digits(&k), expected);
    assert_eq!(expected, 75113);
}

#[test]
fn isogeny_bound_log_degree_branch() {
    // for [K:ℚ] = 20 the maximum is log 20 ≈ 2.996
    let k = isogeny_degree_bound(1, 20, &BigRat::from_integer(1.into())).unwrap();
    let log10 = 1024.0 * (64.0 * 14f64.log10() + 20f64.log10() + 2.0 * 20f64.ln().log10());
    assert_eq!(decimal_digits(&k), log10.floor() as usize + 1);
    let below = isogeny_degree_bound(1, 20, &BigRat::new(1.into(), 2.into())).unwrap();
    assert_eq!(k, below);
}

#[test]
fn isogeny_bound_monotone_in_height() {
    let hs = [(1, 2), (1, 1), (3, 2), (2, 1), (7, 3), (5, 1)];
    let vals: Vec<BigInt> = hs
        .iter()
        .map(|&(p, q)| isogeny_degree_bound(1, 3, &BigRat::new(p.into(), q.into())).unwrap())
        .collect();
    assert!(vals.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn mordell_examples() {
    let c = cfg(vec![], vec![], 5, 0);
    let f = fixture(json!({
        "polarizations": {"E": ["L1", "L2"]},
        "points": [
            {"label": "s1", "coords": ["0", "1"], "rational": true, "fibers": [{"variety": "E", "polarization": "L1"}, {"variety": "E", "polarization": "L2"}]},
            {"label": "s2", "coords": ["sqrt2", "1"], "rational": false, "fibers": [{"variety": "E", "polarization": "L1"}]},
            {"label": "s3", "rational": true, "fibers": [{"variety": "F", "polarization": "L1"}]}
        ]
    }));
    assert!(run_mordell(&c, &f, &[], &f).unwrap().is_empty());
    let e = PolarizedVariety {
        label: "E".into(),
        degree: 1,
    };
    let pts = run_mordell(&c, &f, &[e.clone(), e], &f).unwrap();
    assert_eq!(pts.len(), 1);
    assert_eq!(pts[0].label, "s1");
}

proptest! {
    #[test]
    fn determines_traces_agrees_with_pairwise_scan(
        reps in prop::collection::vec(prop::collection::btree_map(0u8..5, -2i8..3, 5), 0..5),
        t in prop::collection::btree_set(0u8..5, 0..6),
    ) {
        let t: Vec<u8> = t.into_iter().collect();
        let mut expected = true;
        for a in &reps {
            for b in &reps {
                if t.iter().all(|c| a[c] == b[c]) && a != b {
                    expected = false;
                }
            }
        }
        prop_assert_eq!(determines_traces_check(&t, &reps), expected);
    }

    #[test]
    fn candidates_stay_in_weil_range(norms in prop::collection::vec(2u64..40, 0..3), g in 1u64..3) {
        let sites: Vec<PrimeSite> = norms.iter().enumerate().map(|(i, &n)| site(&format!("s{i}"), n)).collect();
        let cands = weil_candidates(&sites, g, CANDIDATE_BUDGET).unwrap();
        let distinct: std::collections::BTreeSet<Vec<i64>> = cands.iter().map(|c| c.values(&sites)).collect();
        prop_assert_eq!(distinct.len(), cands.len());
        for c in &cands {
            for s in &sites {
                let a = c.traces[&s.label];
                prop_assert!(((a * a) as u64) <= 4 * g * g * s.norm);
            }
        }
    }
}
