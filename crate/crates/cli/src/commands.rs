use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde_json::{json, Value};
use toolkit_core::analytic::{
    endomorphism_ring, frobenius_trace, period_lattice, torsion_points, weil_bound_holds,
    CurveModel, Uniformizer,
};
use toolkit_core::engine::{
    run_mordell, run_shafarevich, EngineConfig, FixtureOracles, OracleSuite, PolarizedVariety,
    RunVerdict,
};
use toolkit_core::exact::rational::fmt_rat;
use toolkit_core::exact::Matrix;
use toolkit_core::global::{
    all_invariants, decompose, real_splitting, signature_classify, HermitianForm,
};
use toolkit_core::heisenberg::autos::SP_ENUMERATION_BUDGET;
use toolkit_core::heisenberg::mumford::automorphism_generators;
use toolkit_core::heisenberg::relations::{
    coefficient_size, distinct_quadrics, quadric_span_rank, set_stability_failures,
};
use toolkit_core::heisenberg::{
    automorphism_group, lifts_of, marking_orbit, riemann_relations_with, std_rep, symplectic_group,
    theta_null_fixture, ComplexField, DeltaType, HeisenbergElement, Unit, Z2Choice,
};
use toolkit_core::padic::{
    check_splitting, decompose_module, local_decomposition, maximal_order_at, split_etale,
};
use toolkit_core::search::{covering_point, generators_in_ball, EuclideanLattice};
use toolkit_core::StructuredAlgebra;

use crate::manifest::RunManifest;

fn algebra(m: &mut RunManifest, path: &Path) -> Result<StructuredAlgebra> {
    Ok(StructuredAlgebra::from_json(&m.read_json(path)?)?)
}

fn rows_json(rows: &[Vec<toolkit_core::BigRat>]) -> Value {
    json!(rows
        .iter()
        .map(|r| r.iter().map(fmt_rat).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

pub fn maxorder(m: &mut RunManifest, input: &Path, ell: u64) -> Result<Value> {
    let alg = algebra(m, input)?;
    let o = maximal_order_at(&alg, ell)?;
    Ok(
        json!({"ell": ell, "basis": rows_json(o.basis()), "discriminant_valuation": o.discriminant_valuation(&alg)}),
    )
}

pub fn split(m: &mut RunManifest, input: &Path, ell: u64, prec: u32) -> Result<Value> {
    let alg = algebra(m, input)?;
    let s = split_etale(&alg, ell, prec)?;
    Ok(json!({
        "ell": ell,
        "N": prec,
        "order_basis": rows_json(s.order.basis()),
        "idempotents": s.idempotents.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
        "verified": check_splitting(&alg, &s),
    }))
}

pub fn invariant(m: &mut RunManifest, input: &Path, ell: u64, prec: u32) -> Result<Value> {
    let alg = algebra(m, input)?;
    let parts = local_decomposition(&alg, ell, prec)?;
    Ok(
        json!({"ell": ell, "factors": parts.iter().map(|(e, inv)| json!({"idempotent": e.to_json(), "invariant": inv.to_json()})).collect::<Vec<_>>()}),
    )
}

pub fn module_decompose(
    m: &mut RunManifest,
    input: &Path,
    rep: &Path,
    ell: u64,
    prec: u32,
) -> Result<Value> {
    let alg = algebra(m, input)?;
    let v = m.read_json(rep)?;
    let mats = v
        .as_array()
        .context("representation must be an array of matrices, one per basis element")?;
    let rep: Vec<Matrix<toolkit_core::BigRat>> = mats
        .iter()
        .map(|x| {
            match toolkit_core::ExactMatrix::from_json(&json!({"kind": "rational", "entries": x}))?
            {
                toolkit_core::ExactMatrix::Rational(r) => Ok(r),
                _ => unreachable!("rational kind requested"),
            }
        })
        .collect::<Result<_>>()?;
    let comps = decompose_module(&alg, &rep, ell, prec)?;
    Ok(json!({"ell": ell, "components": comps.iter().map(|c| c.to_json()).collect::<Vec<_>>()}))
}

pub fn global_decompose(m: &mut RunManifest, input: &Path) -> Result<Value> {
    Ok(decompose(&algebra(m, input)?)?.to_json())
}

pub fn invariants(m: &mut RunManifest, input: &Path) -> Result<Value> {
    let alg = algebra(m, input)?;
    let mut out = all_invariants(&alg)?.to_json();
    let rs = real_splitting(&alg)?;
    out["real_splitting"] =
        json!({"split": rs.split, "signature": [rs.signature.0, rs.signature.1]});
    Ok(out)
}

pub fn signature(m: &mut RunManifest, input: &Path) -> Result<Value> {
    let form = HermitianForm::from_json(&m.read_json(input)?)?;
    Ok(signature_classify(&form).to_json())
}

fn lattice(m: &mut RunManifest, input: &Path) -> Result<EuclideanLattice> {
    let v = m.read_json(input)?;
    let cols: Vec<Vec<f64>> = serde_json::from_value(
        v.get("columns")
            .cloned()
            .context("lattice needs \"columns\"")?,
    )?;
    Ok(EuclideanLattice::from_columns(&cols)?)
}

pub fn lattice_cover(
    m: &mut RunManifest,
    input: &Path,
    point: &[f64],
    radius: f64,
) -> Result<Value> {
    let lat = lattice(m, input)?;
    let p = covering_point(&lat, point, radius)?;
    let dist = p
        .point_f64()
        .iter()
        .zip(point)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(
        json!({"coords": p.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(), "point": p.point_f64(), "distance": dist}),
    )
}

pub fn lattice_gens(m: &mut RunManifest, input: &Path, radius: f64) -> Result<Value> {
    let lat = lattice(m, input)?;
    let gens = generators_in_ball(&lat, radius)?;
    Ok(
        json!({"count": gens.len(), "generators": gens.iter().map(|p| p.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()}),
    )
}

fn curve(m: &mut RunManifest, path: &Path) -> Result<CurveModel> {
    Ok(CurveModel::from_json(&m.read_json(path)?)?)
}

pub fn periods(m: &mut RunManifest, input: &Path, prec: u32) -> Result<Value> {
    let c = curve(m, input)?;
    Ok(period_lattice(&c, prec)?.to_json())
}

pub fn endring(m: &mut RunManifest, input: &Path, prec: u32) -> Result<Value> {
    let c = curve(m, input)?;
    let lat = period_lattice(&c, prec)?;
    Ok(endomorphism_ring(&lat)?.to_json())
}

pub fn aptrace(m: &mut RunManifest, input: &Path, primes: &[u64]) -> Result<Value> {
    let c = curve(m, input)?;
    let mut rows = Vec::new();
    for &p in primes {
        let ap = frobenius_trace(&c, p)?;
        rows.push(json!({"p": p, "a_p": ap, "weil_bound_holds": weil_bound_holds(ap, p)}));
    }
    Ok(json!(rows))
}

pub fn torsion(m: &mut RunManifest, input: &Path, n: u64, prec: u32) -> Result<Value> {
    let c = curve(m, input)?;
    let u = Uniformizer::new(&c, prec)?;
    let lat = period_lattice(&c, prec)?;
    let pts = torsion_points(&u, &lat, n)?;
    Ok(
        json!({"n": n, "count": pts.len(), "points": pts.iter().map(|p| p.to_json()).collect::<Vec<_>>()}),
    )
}

pub fn heisenberg_autos(delta: &DeltaType) -> Result<Value> {
    let sp = symplectic_group(delta, SP_ENUMERATION_BUDGET)?;
    let lifts = sp.first().map(|s| lifts_of(s).len()).unwrap_or(0);
    let aut = automorphism_group(delta, SP_ENUMERATION_BUDGET)?;
    let gens = automorphism_generators(delta)?;
    Ok(json!({
        "delta": delta.to_json(),
        "symplectic_order": sp.len(),
        "lifts_per_symplectic_map": lifts,
        "automorphism_order": aut.len(),
        "generators": gens.iter().map(|a| a.to_json()).collect::<Vec<_>>(),
    }))
}

pub fn heisenberg_rep(delta: &DeltaType, t: u64, a: &[u64], l: &[u64]) -> Result<Value> {
    let x = HeisenbergElement::new(delta, Unit::root(t, delta.root_order()), a, l)?;
    Ok(json!({"element": x.to_json(), "matrix": std_rep(&x).to_json()}))
}

fn fixture_field(delta: &DeltaType) -> ComplexField {
    ComplexField::new(delta.root_order(), 1e-9)
}

pub fn heisenberg_relations(
    delta: &DeltaType,
    taus: &[Complex64],
    choice: Z2Choice,
) -> Result<Value> {
    let f = fixture_field(delta);
    let fx = theta_null_fixture(delta, taus)?;
    let rels = riemann_relations_with(&f, &fx.q, choice);
    let quads = distinct_quadrics(&f, rels.iter().map(|r| r.quadric.clone()));
    let xmax = fx.q.coords.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let worst = quads
        .iter()
        .map(|q| q.eval(&f, &fx.q.coords).norm() / (coefficient_size(&f, q) * xmax * xmax))
        .fold(0.0, f64::max);
    let failures = set_stability_failures(&f, delta, &quads);
    Ok(json!({
        "fixture": fx.q.to_json(&f),
        "tail_bound": fx.tail_bound,
        "relations": rels.len(),
        "distinct_quadrics": quads.len(),
        "span_rank": quadric_span_rank(&f, &quads),
        "max_relative_residual": worst,
        "translation_stable": failures.is_empty(),
        "quadrics": quads.iter().map(|q| q.to_json(&f)).collect::<Vec<_>>(),
    }))
}

pub fn heisenberg_orbit(delta: &DeltaType, taus: &[Complex64], budget: usize) -> Result<Value> {
    let f = fixture_field(delta);
    let fx = theta_null_fixture(delta, taus)?;
    let orbit = marking_orbit(&f, &fx.q, budget)?;
    Ok(json!({"delta": delta.to_json(), "orbit_size": orbit.len()}))
}

fn engine_inputs(
    m: &mut RunManifest,
    config: &Path,
    oracles: &Path,
    seed: Option<u64>,
) -> Result<(EngineConfig, FixtureOracles)> {
    let mut cfg: EngineConfig =
        serde_json::from_str(&m.read(config)?).context("parsing engine config")?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    m.seed = cfg.seed;
    let fx = FixtureOracles::from_json(&m.read(oracles)?)?;
    Ok((cfg, fx))
}

/// Trace events as JSON lines, followed by a summary line.
pub fn shafarevich(
    m: &mut RunManifest,
    config: &Path,
    oracles: &Path,
    seed: Option<u64>,
) -> Result<Vec<Value>> {
    let (cfg, fx) = engine_inputs(m, config, oracles, seed)?;
    let run = run_shafarevich(
        &cfg,
        &OracleSuite {
            lift: &fx,
            enumerate: &fx,
            isogeny: &fx,
        },
    )?;
    let mut lines: Vec<Value> = run
        .log
        .iter()
        .map(serde_json::to_value)
        .collect::<std::result::Result<_, _>>()?;
    lines.push(json!({"verdict": run.verdict, "iterations": run.iterations, "output": run.output}));
    Ok(lines)
}

pub fn mordell(
    m: &mut RunManifest,
    config: &Path,
    oracles: &Path,
    varieties: Option<&Path>,
    seed: Option<u64>,
) -> Result<Value> {
    let (cfg, fx) = engine_inputs(m, config, oracles, seed)?;
    let sigma: Vec<PolarizedVariety> = match varieties {
        Some(p) => serde_json::from_str(&m.read(p)?).context("parsing varieties")?,
        None => {
            let run = run_shafarevich(
                &cfg,
                &OracleSuite {
                    lift: &fx,
                    enumerate: &fx,
                    isogeny: &fx,
                },
            )?;
            if run.verdict != RunVerdict::Completed {
                bail!(
                    "the Shafarevich search was inconclusive after {} iterations",
                    run.iterations
                );
            }
            run.output
        }
    };
    let points = run_mordell(&cfg, &fx, &sigma, &fx)?;
    Ok(json!({"varieties": sigma.len(), "points": points}))
}
