use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use toolkit_bench::{delta8, engine_config, hamilton, lemniscatic, sqrt5, theta8};
use toolkit_core::analytic::{frobenius_trace, period_lattice};
use toolkit_core::engine::{
    run_shafarevich, weil_candidates, FixtureOracles, OracleSuite, PrimeSite, CANDIDATE_BUDGET,
};
use toolkit_core::global::all_invariants;
use toolkit_core::heisenberg::autos::SP_ENUMERATION_BUDGET;
use toolkit_core::heisenberg::{
    automorphism_group, riemann_relations, symplectic_group, ComplexField,
};
use toolkit_core::padic::{maximal_order_at, split_etale};

fn algebra(c: &mut Criterion) {
    let s5 = sqrt5();
    let h = hamilton();
    c.bench_function("maximal_order sqrt5 at 2", |b| {
        b.iter(|| maximal_order_at(black_box(&s5), 2).unwrap())
    });
    c.bench_function("split_etale sqrt5 at 11 N=8", |b| {
        b.iter(|| split_etale(black_box(&s5), 11, 8).unwrap())
    });
    c.bench_function("all_invariants hamilton", |b| {
        b.iter(|| all_invariants(black_box(&h)).unwrap())
    });
}

fn analytic(c: &mut Criterion) {
    let e = lemniscatic();
    let mut g = c.benchmark_group("analytic");
    g.sample_size(10);
    g.bench_function("period_lattice 128 bits", |b| {
        b.iter(|| period_lattice(black_box(&e), 128).unwrap())
    });
    g.bench_function("frobenius_trace p=47", |b| {
        b.iter(|| frobenius_trace(black_box(&e), 47).unwrap())
    });
    g.finish();
}

fn heisenberg(c: &mut Criterion) {
    let d = delta8();
    let q = theta8();
    let f = ComplexField::new(16, 1e-9);
    let mut g = c.benchmark_group("heisenberg");
    g.sample_size(10);
    g.bench_function("symplectic_group (8)", |b| {
        b.iter(|| symplectic_group(black_box(&d), SP_ENUMERATION_BUDGET).unwrap())
    });
    g.bench_function("automorphism_group (8)", |b| {
        b.iter(|| automorphism_group(black_box(&d), SP_ENUMERATION_BUDGET).unwrap())
    });
    g.bench_function("riemann_relations (8)", |b| {
        b.iter(|| riemann_relations(&f, black_box(&q)))
    });
    g.bench_function("theta fixture (8)", |b| {
        b.iter(|| {
            toolkit_core::heisenberg::theta_null_fixture(&d, &[Complex64::new(0.3, 1.1)]).unwrap()
        })
    });
    g.finish();
}

fn engine(c: &mut Criterion) {
    let sites: Vec<PrimeSite> = [5, 7, 11, 13]
        .iter()
        .map(|&n| PrimeSite::new(format!("p{n}"), n).unwrap())
        .collect();
    c.bench_function("weil_candidates 4 sites", |b| {
        b.iter(|| weil_candidates(black_box(&sites), 1, CANDIDATE_BUDGET).unwrap())
    });
    let cfg = engine_config(10);
    let fx = FixtureOracles::default();
    c.bench_function("run_shafarevich 10 idle iterations", |b| {
        b.iter(|| {
            run_shafarevich(
                black_box(&cfg),
                &OracleSuite {
                    lift: &fx,
                    enumerate: &fx,
                    isogeny: &fx,
                },
            )
            .unwrap()
        })
    });
}

criterion_group!(kernels, algebra, analytic, heisenberg, engine);
criterion_main!(kernels);
