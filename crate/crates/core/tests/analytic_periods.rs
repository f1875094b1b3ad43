use proptest::prelude::*;
use rug::Float;

use toolkit_core::analytic::homology::{int_identity, int_mul, int_transpose};
use toolkit_core::analytic::*;
use toolkit_core::exact::rational::{rat, rat_frac};
use toolkit_core::exact::QPoly;
use toolkit_core::Error;

const PREC: u32 = 128;

fn lemniscatic() -> CurveModel {
    CurveModel::from_ints([0, -4, 0, 4]).unwrap()
}

fn agm(a: f64, b: f64) -> Float {
    let (mut a, mut b) = (
        Float::with_val(200, a).sqrt(),
        Float::with_val(200, b).sqrt(),
    );
    for _ in 0..40 {
        let m = Float::with_val(200, &a + &b) / 2u32;
        b = Float::with_val(200, &a * &b).sqrt();
        a = m;
    }
    a
}

/// Real period π/AGM(√(e₁−e₃), √(e₁−e₂)) of Y² = 4(X−e₁)(X−e₂)(X−e₃), three real roots.
fn agm_real_period(e1: f64, e2: f64, e3: f64) -> Float {
    Float::with_val(200, rug::float::Constant::Pi) / agm(e1 - e3, e1 - e2)
}

/// Adaptive Simpson quadrature.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(
        f,
        a,
        b,
        fa,
        fm,
        fb,
        (b - a) / 6.0 * (fa + 4.0 * fm + fb),
        tol,
        50,
    )
}

fn setup(c: &CurveModel) -> (Uniformizer, PeriodLattice) {
    (
        Uniformizer::new(c, PREC).unwrap(),
        period_lattice(c, PREC).unwrap(),
    )
}

#[test]
fn lemniscatic_lattice_matches_agm() {
    let (_, lat) = setup(&lemniscatic());
    let oracle = agm_real_period(1.0, 0.0, -1.0);
    let real = lat.real_period().unwrap();
    assert!((Float::with_val(200, &real - &oracle)).abs().to_f64() < 1e-30);
    assert!((oracle.to_f64() - 2.62205755429212).abs() < 1e-13);
    let tau = lat.tau();
    assert!((&tau - &Cx::i(PREC)).abs_f64() < 1e-30);
    assert!(lat.error < 1e-30);
    assert!(lat.ball_generators >= 2);
}

#[test]
fn hexagonal_lattice() {
    let (_, lat) = setup(&CurveModel::from_ints([-4, 0, 0, 4]).unwrap());
    let t = reduce_tau(&lat.tau());
    let zeta6 = Cx::from_f64(PREC, 0.5, 3f64.sqrt() / 2.0);
    let zeta3 = Cx::from_f64(PREC, -0.5, 3f64.sqrt() / 2.0);
    assert!((&t - &zeta6).abs_f64().min((&t - &zeta3).abs_f64()) < 1e-10);
}

#[test]
fn rescaling_scales_the_lattice() {
    let c = CurveModel::from_ints([1, -2, 3, 2]).unwrap();
    let l = rat(3);
    let s = c.scaled(&l).unwrap();
    let (_, a) = setup(&c);
    let (_, b) = setup(&s);
    // Λ_c = λ⁻¹·Λ_s, so both bases generate the same lattice after scaling.
    for w in &b.generators {
        let (x, y) = a.coords(&w.scale_frac(1, 3));
        for v in [x.to_f64(), y.to_f64()] {
            assert!((v - v.round()).abs() < 1e-20);
        }
    }
    assert!((b.area() / a.area() - 9.0).abs() < 1e-12);
}

#[test]
fn half_period_is_two_torsion() {
    let c = lemniscatic();
    let half = Cx::real(agm_real_period(1.0, 0.0, -1.0))
        .with_prec(PREC)
        .scale_frac(1, 2);
    let p = exp_point(&c, &half, PREC).unwrap();
    let (x, y) = p.to_affine().unwrap();
    assert!((&x - &Cx::one(PREC)).abs_f64() < 1e-30);
    assert!(y.abs_f64() < 1e-30);
    assert!(exp_point(&c, &Cx::zero(PREC), PREC)
        .unwrap()
        .is_origin(1e-40));
}

#[test]
fn exp_is_periodic() {
    let c = CurveModel::from_ints([1, -2, 3, 2]).unwrap();
    let (u, lat) = setup(&c);
    let z = Cx::from_f64(u.working_precision(), 0.37, -0.81);
    let p = u.exp(&z).unwrap();
    for (a, b) in [(1, 0), (0, 1), (-2, 3)] {
        let q = u
            .exp(&(&z + &lat.combination(a, b).with_prec(u.working_precision())))
            .unwrap();
        assert!(p.distance(&q) < 1e-30);
    }
}

#[test]
fn log_at_x_equal_two_matches_quadrature() {
    // ∫_2^∞ dx/√(4x³−4x) = ∫_0^{1/√2} dt/√(1−t⁴) with x = t⁻².
    let oracle = simpson(
        &|t| 1.0 / (1.0 - t.powi(4)).sqrt(),
        0.0,
        std::f64::consts::FRAC_1_SQRT_2,
        1e-15,
    );
    let c = lemniscatic();
    let (u, lat) = setup(&c);
    let x = Cx::from_f64(u.working_precision(), 2.0, 0.0);
    let y = Cx::from_f64(u.working_precision(), 24.0, 0.0).sqrt();
    let p = ProjPoint::affine(x, y);
    assert_eq!(u.log(&p).unwrap_err(), Error::OutOfChart);
    let z = log_point_global(&u, &lat, &p).unwrap();
    // y > 0 there, so the point is exp of a negative real number.
    assert!(
        (z.re.to_f64() + oracle).abs() < 1e-12,
        "{} vs {}",
        z.re.to_f64(),
        -oracle
    );
    assert!(z.im.to_f64().abs() < 1e-12);
    assert!(u.exp(&z).unwrap().distance(&p) < 1e-30);
}

#[test]
fn ball_radius_shrinks_when_coefficients_grow() {
    let mut prev = f64::INFINITY;
    for k in 0..4 {
        let s = rat(10).pow(k);
        let c = CurveModel::new([rat(1) * &s, rat(-2) * &s, rat(3) * &s, rat(2) * &s]).unwrap();
        let b = exp_ball(&c, PREC).unwrap();
        assert!(b.chart.contraction < 0.5 && b.chart.eps > 0.0);
        assert!(b.chart.eps1 <= (1.0 - b.chart.contraction) * b.chart.eps + 1e-15);
        assert!(b.radius < prev);
        prev = b.radius;
    }
    assert!(matches!(
        CurveModel::from_ints([0, 0, 1, 1]),
        Err(Error::NotSmoothAtOrigin(_))
    ));
}

#[test]
fn local_inversion_matches_bisection() {
    let (mut lo, mut hi) = (0.0f64, 0.1f64);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m + m * m < 0.1 {
            lo = m;
        } else {
            hi = m;
        }
    }
    let f = PolynomialMap::from_f64(PREC, &[0.0, 1.0, 1.0]);
    let r = local_invert(
        &f,
        &[Cx::zero(PREC)],
        &[Cx::from_f64(PREC, 0.1, 0.0)],
        0.25,
        0.5,
        100,
    )
    .unwrap();
    assert!((r.x[0].re.to_f64() - lo).abs() < 1e-15);
    assert!((lo - 0.0916079783).abs() < 1e-9);
    assert!(r.iterations > 1);
    let id = PolynomialMap::from_f64(PREC, &[0.0, 1.0]);
    let y = Cx::from_f64(PREC, 0.3, -0.2);
    let r = local_invert(&id, &[Cx::zero(PREC)], &[y.clone()], 1.0, 0.1, 100).unwrap();
    assert!((&r.x[0] - &y).abs_f64() < 1e-30);
}

#[test]
fn homology_of_multiplication_and_cm() {
    let c = lemniscatic();
    let (u, lat) = setup(&c);
    let id = homology_action(&PolyMorphism::identity(), (&u, &lat), (&u, &lat)).unwrap();
    assert_eq!(id.matrix, int_identity(2));
    for f in [
        &PolyMorphism::duplication(4) as &dyn Morphism,
        &MulBy { n: 2, curve: &u },
    ] {
        let h = homology_action(f, (&u, &lat), (&u, &lat)).unwrap();
        assert_eq!(h.matrix, vec![vec![2, 0], vec![0, 2]]);
        assert!(h.rounding_error < 0.1);
    }
    let cm = homology_action(&PolyMorphism::times_i(), (&u, &lat), (&u, &lat)).unwrap();
    assert_eq!(
        int_mul(&cm.matrix, &cm.matrix),
        vec![vec![-1, 0], vec![0, -1]]
    );
    assert!(cm.rounding_error < 0.1);
}

#[test]
fn homology_is_functorial() {
    let c = CurveModel::from_ints([1, -2, 3, 2]).unwrap();
    let (u, lat) = setup(&c);
    let two = MulBy { n: 2, curve: &u };
    let three = MulBy { n: 3, curve: &u };
    let six = Compose { f: &two, g: &three };
    let m = |f: &dyn Morphism| homology_action(f, (&u, &lat), (&u, &lat)).unwrap().matrix;
    assert_eq!(m(&six), int_mul(&m(&two), &m(&three)));
    assert_eq!(m(&six), vec![vec![6, 0], vec![0, 6]]);
}

#[test]
fn chern_class_of_plane_cubics() {
    for c in [lemniscatic(), CurveModel::from_ints([1, -2, 3, 2]).unwrap()] {
        let (u, lat) = setup(&c);
        let ch = chern_class(&u, &lat).unwrap();
        assert_eq!(ch.matrix, vec![vec![0, 3], vec![-3, 0]]);
        assert!(ch.rounding_error < 0.1);
        let neg: IntMat = ch
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| -x).collect())
            .collect();
        assert_eq!(int_transpose(&ch.matrix), neg);
        let uu = [[2, 1], [1, 1]];
        let changed = chern_class(&u, &lat.with_basis(uu).unwrap()).unwrap();
        let um = vec![vec![2, 1], vec![1, 1]];
        assert_eq!(
            changed.matrix,
            int_mul(&int_mul(&int_transpose(&um), &ch.matrix), &um)
        );
    }
}

#[test]
fn endomorphisms_and_automorphisms() {
    let (u, lat) = setup(&lemniscatic());
    let end = endomorphism_ring(&lat).unwrap();
    assert_eq!((end.rank(), end.discriminant), (2, Some(-4)));
    let m = &end.basis[1];
    assert_eq!(int_mul(m, m), vec![vec![-1, 0], vec![0, -1]]);
    let pairing = chern_class(&u, &lat).unwrap().matrix;
    let autos = polarized_automorphisms(&lat, &pairing, &end).unwrap();
    assert_eq!(autos.len(), 4);
    for a in &autos {
        assert_eq!(int_mul(&int_mul(&int_transpose(a), &pairing), a), pairing);
    }
    let generic = CurveModel::from_ints([-4, -4, 0, 4]).unwrap();
    let (u, lat) = setup(&generic);
    let end = endomorphism_ring(&lat).unwrap();
    assert_eq!(end.rank(), 1);
    assert_eq!(end.basis[0], int_identity(2));
    let pairing = chern_class(&u, &lat).unwrap().matrix;
    assert_eq!(
        polarized_automorphisms(&lat, &pairing, &end).unwrap(),
        vec![vec![vec![-1, 0], vec![0, -1]], int_identity(2)]
    );
    let (_, hex) = setup(&CurveModel::from_ints([-4, 0, 0, 4]).unwrap());
    assert_eq!(endomorphism_ring(&hex).unwrap().discriminant, Some(-3));
}

#[test]
fn torsion_points_of_the_lemniscatic_curve() {
    let (u, lat) = setup(&lemniscatic());
    let one = torsion_points(&u, &lat, 1).unwrap();
    assert_eq!(one.len(), 1);
    assert!(one[0].is_origin());
    let two = torsion_points(&u, &lat, 2).unwrap();
    let mut xs: Vec<QPoly> = two.iter().filter_map(|p| p.x_minpoly.clone()).collect();
    xs.sort_by_key(|p| p.coeffs().to_vec());
    let expected: Vec<QPoly> = [
        QPoly::from_ints(&[-1, 1]),
        QPoly::x(),
        QPoly::from_ints(&[1, 1]),
    ]
    .into();
    let mut expected = expected;
    expected.sort_by_key(|p| p.coeffs().to_vec());
    assert_eq!(xs, expected);
    assert!(two
        .iter()
        .filter_map(|p| p.y_minpoly.clone())
        .all(|p| p == QPoly::x()));
    let three = torsion_points(&u, &lat, 3).unwrap();
    assert_eq!(three.len(), 9);
    for p in &three {
        assert!(u.mul(3, &p.point).is_origin(1e-25));
    }
    // x-coordinates of 3-torsion are roots of 3x⁴ − 6x² − 1 (the 3-division polynomial, up to scale).
    let psi3 = QPoly::new(vec![rat(-1), rat(0), rat(-6), rat(0), rat(3)]).monic();
    for p in three.iter().filter(|p| !p.is_origin()) {
        let mx = p.x_minpoly.as_ref().unwrap();
        assert_eq!(psi3.rem(mx), QPoly::zero());
    }
}

/// #C(𝔽_p) by enumerating all pairs.
fn naive_count(co: [i64; 4], p: i64) -> i64 {
    let f = |x: i64| {
        co.iter()
            .rev()
            .fold(0i64, |acc, &a| (acc * x + a).rem_euclid(p))
    };
    let mut n = 1;
    for x in 0..p {
        for y in 0..p {
            if (y * y - f(x)).rem_euclid(p) == 0 {
                n += 1;
            }
        }
    }
    n
}

fn corpus() -> Vec<[i64; 4]> {
    let mut v = Vec::new();
    for (a, b) in [
        (-1, 0),
        (0, 1),
        (1, 1),
        (-2, 1),
        (3, -5),
        (-7, 6),
        (2, 3),
        (5, -1),
        (-4, 4),
        (0, -2),
    ] {
        v.push([b, a, 0, 1]);
    }
    for co in [
        [1, 2, 3, 1],
        [-1, 1, 1, 1],
        [2, 0, -1, 3],
        [0, -4, 0, 4],
        [-4, 0, 0, 4],
        [5, -3, 2, 1],
        [1, 1, 0, 2],
        [3, 0, 1, 5],
        [-2, 5, -1, 1],
        [7, -1, 0, 6],
    ] {
        v.push(co);
    }
    v
}

fn small_primes(bound: u64) -> Vec<u64> {
    (3..=bound)
        .filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .collect()
}

#[test]
fn frobenius_traces_match_point_counts() {
    for co in corpus() {
        let c = CurveModel::from_ints(co).unwrap();
        let disc = c.discriminant();
        for p in small_primes(50) {
            let bad = (&disc * rat(1)).numer() % p as i64 == 0.into() || co[3] % p as i64 == 0;
            match frobenius_trace(&c, p) {
                Ok(ap) => {
                    assert!(!bad, "{co:?} at {p}");
                    assert_eq!(
                        ap,
                        p as i64 + 1 - naive_count(co, p as i64),
                        "{co:?} at {p}"
                    );
                    assert!(weil_bound_holds(ap, p));
                }
                Err(e) => {
                    assert!(bad, "{co:?} at {p}: {e}");
                    assert_eq!(e, Error::BadReduction(p));
                }
            }
        }
    }
    let c = CurveModel::from_ints([0, -1, 0, 1]).unwrap();
    assert_eq!(frobenius_trace(&c, 2), Err(Error::BadReduction(2)));
    assert_eq!(
        frobenius_trace(
            &CurveModel::new([rat_frac(1, 3), rat(1), rat(0), rat(1)]).unwrap(),
            3
        ),
        Err(Error::BadReduction(3))
    );
}

#[test]
fn weil_bound_on_the_corpus_up_to_200() {
    for co in corpus() {
        let c = CurveModel::from_ints(co).unwrap();
        for p in small_primes(200) {
            if let Ok(ap) = frobenius_trace(&c, p) {
                assert!(weil_bound_holds(ap, p), "{co:?} at {p}: {ap}");
                // a_p ≡ p + 1 − #C(𝔽_p) ≡ #C[2](𝔽_p)-parity: a_p is even iff the cubic has a root mod p.
                let has_root = (0..p as i64).any(|x| {
                    co.iter()
                        .rev()
                        .fold(0i64, |acc, &a| (acc * x + a).rem_euclid(p as i64))
                        == 0
                });
                assert_eq!(ap.rem_euclid(2) == 0, has_root, "{co:?} at {p}");
            }
        }
    }
}

#[test]
fn mesh_periods_generate() {
    let (_, lat) = setup(&CurveModel::from_ints([1, -2, 3, 2]).unwrap());
    assert!(lat.mesh_periods >= 3 && lat.ball_generators >= 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn log_inverts_exp_on_the_ball(r in 0.0f64..0.999, theta in 0.0f64..std::f64::consts::TAU) {
        use std::sync::OnceLock;
        static U: OnceLock<Uniformizer> = OnceLock::new();
        let u = U.get_or_init(|| Uniformizer::new(&CurveModel::from_ints([1, -2, 3, 2]).unwrap(), PREC).unwrap());
        let b = u.ball().radius;
        let z = Cx::from_f64(u.working_precision(), r * b * theta.cos(), r * b * theta.sin());
        let back = u.log(&u.exp(&z).unwrap()).unwrap();
        prop_assert!((&back - &z).abs_f64() < 1e-10);
    }
}

#[test]
fn endomorphism_basis_is_closed() {
    for c in [
        lemniscatic(),
        CurveModel::from_ints([-4, 0, 0, 4]).unwrap(),
        CurveModel::from_ints([-4, -4, 0, 4]).unwrap(),
    ] {
        let (_, lat) = setup(&c);
        let end = endomorphism_ring(&lat).unwrap();
        assert_eq!(&end.basis[0], &int_identity(2));
        if end.rank() == 2 {
            // M² must lie in ℤ·I + ℤ·M.
            let m = &end.basis[1];
            let sq = int_mul(m, m);
            let (i, j) = if m[1][0] != 0 { (1, 0) } else { (0, 1) };
            assert_eq!(sq[i][j] % m[i][j], 0);
            let y = sq[i][j] / m[i][j];
            let rest: Vec<Vec<i64>> = (0..2)
                .map(|r| (0..2).map(|c| sq[r][c] - y * m[r][c]).collect())
                .collect();
            assert_eq!(rest[0][1], 0);
            assert_eq!(rest[1][0], 0);
            assert_eq!(rest[0][0], rest[1][1]);
        }
    }
}
