//! Heisenberg group, representation, automorphisms, Riemann relations and orbits at δ = (8).

use std::collections::HashSet;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toolkit_core::exact::field::Field;
use toolkit_core::exact::matrix::rank;
use toolkit_core::heisenberg::autos::{
    automorphism_group, lifts_of, symplectic_group, HeisenbergAutomorphism, SP_ENUMERATION_BUDGET,
};
use toolkit_core::heisenberg::mumford::{
    marking_orbit, marking_orbit_of, mumford_form_check, standard_inversion, MumfordScheme,
    TranslationSample, Verdict,
};
use toolkit_core::heisenberg::relations::{
    distinct_quadrics, quadric_span_rank, riemann_relations, riemann_relations_with,
    set_stability_failures, Quadric, Z2Choice,
};
use toolkit_core::heisenberg::rep::{intertwining_system_dense, std_rep, translation_matrix};
use toolkit_core::heisenberg::theta::{theta_null_fixture, theta_point, ThetaNullVector};
use toolkit_core::heisenberg::{
    commutator_pairing, heisenberg_mul, CoeffField, ComplexField, Cyclotomic, DeltaType,
    HeisenbergElement, Unit,
};
use toolkit_core::{BigRat, Error};

fn d8() -> DeltaType {
    DeltaType::new(vec![8]).unwrap()
}

fn random_element(rng: &mut ChaCha8Rng, d: &DeltaType) -> HeisenbergElement {
    let t = Unit::new(
        BigRat::new(rng.gen_range(1..5).into(), rng.gen_range(1..5).into()),
        rng.gen_range(0..16),
        16,
    )
    .unwrap();
    HeisenbergElement::new(d, t, &[rng.gen_range(0..8)], &[rng.gen_range(0..8)]).unwrap()
}

/// The action X_b ↦ t·ζ₈^{bℓ}·X_{b+a} written out as a dense complex matrix.
fn rho_oracle(x: &HeisenbergElement) -> Vec<Vec<Complex64>> {
    let t = Complex64::from_polar(
        num_traits::ToPrimitive::to_f64(&x.t.scale).unwrap(),
        std::f64::consts::TAU * x.t.root as f64 / 16.0,
    );
    let mut m = vec![vec![Complex64::new(0.0, 0.0); 8]; 8];
    for b in 0..8u64 {
        let zeta = Complex64::from_polar(1.0, std::f64::consts::TAU * (b * x.l[0]) as f64 / 8.0);
        m[((b + x.a[0]) % 8) as usize][b as usize] = t * zeta;
    }
    m
}

fn dense_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn dense_close(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> bool {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .all(|(x, y)| (x - y).norm() < 1e-12)
}

#[test]
fn rho_is_a_homomorphism_on_random_pairs() {
    let d = d8();
    let k = ComplexField::new(16, 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let x = random_element(&mut rng, &d);
        let y = random_element(&mut rng, &d);
        let xy = heisenberg_mul(&x, &y).unwrap();
        assert_eq!(std_rep(&xy), std_rep(&x).mul(&std_rep(&y)));
        let lhs = rho_oracle(&xy);
        assert!(dense_close(
            &lhs,
            &dense_mul(&rho_oracle(&x), &rho_oracle(&y))
        ));
        assert!(dense_close(&lhs, &std_rep(&xy).to_dense(&k).to_rows()));
    }
}

#[test]
fn rho_examples() {
    let d = d8();
    let k = Cyclotomic::new(16);
    let scalar = HeisenbergElement::scalar(&d, Unit::root(5, 16));
    let m = std_rep(&scalar).to_dense(&k);
    for i in 0..8 {
        for j in 0..8 {
            let want = if i == j { k.root_of_unity(5) } else { k.zero() };
            assert_eq!(m.get(i, j), &want);
        }
    }
    let diag = std_rep(&HeisenbergElement::lift(&d, &[0], &[1]));
    // ζ₈^x = ζ₁₆^{2x}
    assert_eq!(
        diag.coef.iter().map(|u| u.root).collect::<Vec<_>>(),
        (0..8).map(|x| 2 * x).collect::<Vec<_>>()
    );
}

#[test]
fn commutant_rank_over_q_zeta16() {
    let d = d8();
    let k = Cyclotomic::new(16);
    let pairs: Vec<_> = HeisenbergElement::generators(&d)
        .iter()
        .map(|g| (std_rep(g), std_rep(g)))
        .collect();
    let sys = intertwining_system_dense(&k, &pairs);
    assert_eq!(64 - rank(&k, &sys), 1);
}

#[test]
fn symplectic_group_and_lifts() {
    let d = d8();
    let sp = symplectic_group(&d, SP_ENUMERATION_BUDGET).unwrap();
    assert_eq!(sp.len(), 384);
    // oracle: matrices [[p,q],[r,s]] over ℤ/8 with ps − qr ≡ 1
    let sl2 = (0..8u64.pow(4)).filter(|x| {
        let (p, q, r, s) = (x % 8, x / 8 % 8, x / 64 % 8, x / 512);
        (p * s + 64 - q * r) % 8 == 1
    });
    assert_eq!(sl2.count(), 384);
    let aut = automorphism_group(&d, SP_ENUMERATION_BUDGET).unwrap();
    assert_eq!(aut.len(), 24576);
    assert_eq!(aut.len(), 64 * sp.len());
    let distinct: HashSet<&HeisenbergAutomorphism> = aut.iter().collect();
    assert_eq!(distinct.len(), aut.len());
    for s in sp.iter().step_by(37) {
        let lifts = lifts_of(s);
        assert_eq!(lifts.len(), 64);
        assert!(lifts.iter().all(|f| f.sigma() == *s));
    }
}

#[test]
fn lifted_automorphisms_fix_the_centre_and_descend() {
    let d = d8();
    let aut = automorphism_group(&d, SP_ENUMERATION_BUDGET).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let f = &aut[rng.gen_range(0..aut.len())];
        let x = random_element(&mut rng, &d);
        let y = f.apply(&x).unwrap();
        let c = HeisenbergElement::scalar(&d, x.t.clone());
        assert_eq!(f.apply(&c).unwrap(), c);
        assert_eq!(
            (y.a.clone(), y.l.clone()),
            f.sigma().apply(&(x.a.clone(), x.l.clone()))
        );
    }
}

#[test]
fn intertwiners_of_random_automorphisms() {
    let d = d8();
    let k = Cyclotomic::new(16);
    let aut = automorphism_group(&d, SP_ENUMERATION_BUDGET).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for trial in 0..20 {
        let phi = &aut[rng.gen_range(0..aut.len())];
        assert_eq!(phi.intertwining_dimension(), 1);
        let f = phi.intertwiner().unwrap();
        for x in HeisenbergElement::generators(&d)
            .iter()
            .chain([&random_element(&mut rng, &d)])
        {
            let lhs = f.to_dense(&k);
            let l = toolkit_core::exact::matrix::mat_mul(&k, &lhs, &std_rep(x).to_dense(&k));
            let r = toolkit_core::exact::matrix::mat_mul(
                &k,
                &std_rep(&phi.apply(x).unwrap()).to_dense(&k),
                &lhs,
            );
            assert_eq!(l, r);
        }
        if trial < 4 {
            // independent rank of the dense system over ℚ(ζ₁₆)
            let pairs: Vec<_> = HeisenbergElement::generators(&d)
                .iter()
                .zip(&phi.images)
                .map(|(x, y)| (std_rep(x), std_rep(y)))
                .collect();
            assert_eq!(64 - rank(&k, &intertwining_system_dense(&k, &pairs)), 1);
        }
    }
}

#[test]
fn inner_intertwiner_is_rho_of_g() {
    let d = d8();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let g = random_element(&mut rng, &d);
        let f = HeisenbergAutomorphism::inner(&g).intertwiner().unwrap();
        let rho = toolkit_core::heisenberg::UnitMatrix::from_monomial(&std_rep(&g));
        let (i, j) = (0..64)
            .map(|k| (k / 8, k % 8))
            .find(|&(i, j)| rho.get(i, j).is_some())
            .unwrap();
        let ratio = f.get(i, j).unwrap().div(rho.get(i, j).unwrap());
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(f.get(a, b).cloned(), rho.get(a, b).map(|u| u.mul(&ratio)));
            }
        }
    }
    let id = HeisenbergAutomorphism::identity(&d).intertwiner().unwrap();
    assert_eq!(id.nonzero_count(), 8);
    assert!((0..8).all(|i| id.get(i, i).is_some_and(|u| u.is_one())));
}

#[test]
fn translation_matrix_examples() {
    let d = d8();
    let shift = translation_matrix(&d, &[2], &[0]);
    assert!(shift.coef.iter().all(|u| u.is_one()));
    // (f_s P)_b = P_{b+2}
    assert_eq!(shift.perm, (0..8).map(|b| (b + 6) % 8).collect::<Vec<_>>());
    let diag = translation_matrix(&d, &[0], &[3]);
    assert_eq!(diag.perm, (0..8).collect::<Vec<_>>());
    assert_eq!(
        diag.coef.iter().map(|u| u.root).collect::<Vec<_>>(),
        (0..8).map(|b| 6 * b % 16).collect::<Vec<_>>()
    );
    let s = translation_matrix(&d, &[3], &[5]);
    let mut p = s.clone();
    for _ in 1..8 {
        p = p.mul(&s);
    }
    assert!(p.scalar().is_some());
}

fn fixture() -> ThetaNullVector<Complex64> {
    theta_null_fixture(&d8(), &[Complex64::new(0.3, 1.1)])
        .unwrap()
        .q
}

fn relative_value(q: &Quadric<Complex64>, x: &[Complex64]) -> f64 {
    let k = ComplexField::new(16, 1e-12);
    let size: f64 = q.terms.values().map(|c| c.norm()).sum();
    let xmax = x.iter().map(|c| c.norm()).fold(0.0, f64::max);
    q.eval(&k, x).norm() / (size * xmax * xmax)
}

#[test]
fn relations_vanish_at_the_theta_fixture() {
    let k = ComplexField::new(16, 1e-12);
    let fx = theta_null_fixture(&d8(), &[Complex64::new(0.3, 1.1)]).unwrap();
    assert!(fx.tail_bound < 1e-30);
    for choice in [Z2Choice::DivisibleByTwo, Z2Choice::TwoTorsion] {
        let rels = riemann_relations_with(&k, &fx.q, choice);
        assert_eq!(rels.len(), 16384);
        assert!(rels
            .iter()
            .filter(|r| r.b == r.d)
            .all(|r| r.quadric.is_zero()));
        let worst = rels
            .iter()
            .filter(|r| !r.quadric.is_zero())
            .map(|r| relative_value(&r.quadric, &fx.q.coords))
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{choice:?}: {worst}");
        // the relations cut out the curve: they vanish at other points of the embedding too
        let (p, _) = theta_point(
            &d8(),
            &[Complex64::new(0.3, 1.1)],
            &[Complex64::new(0.17, 0.05)],
        )
        .unwrap();
        let worst = rels
            .iter()
            .filter(|r| !r.quadric.is_zero())
            .map(|r| relative_value(&r.quadric, &p))
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{choice:?} at a point: {worst}");
    }
}

#[test]
fn relations_are_nontrivial() {
    let k = ComplexField::new(16, 1e-10);
    let q = fixture();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let x: Vec<Complex64> = (0..8)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    for (choice, count, span) in [
        (Z2Choice::DivisibleByTwo, 16, 12),
        (Z2Choice::TwoTorsion, 24, 20),
    ] {
        let quads = distinct_quadrics(
            &k,
            riemann_relations_with(&k, &q, choice)
                .into_iter()
                .map(|r| r.quadric),
        );
        assert_eq!(quads.len(), count, "{choice:?}");
        assert_eq!(quadric_span_rank(&k, &quads), span, "{choice:?}");
        assert!(quads.iter().any(|r| relative_value(r, &x) > 1e-3));
    }
}

#[test]
fn quadric_set_is_translation_stable() {
    let k = ComplexField::new(16, 1e-10);
    let q = fixture();
    for choice in [Z2Choice::DivisibleByTwo, Z2Choice::TwoTorsion] {
        let quads = distinct_quadrics(
            &k,
            riemann_relations_with(&k, &q, choice)
                .into_iter()
                .map(|r| r.quadric),
        );
        assert!(
            set_stability_failures(&k, &d8(), &quads).is_empty(),
            "{choice:?}"
        );
    }
}

fn scheme_for(
    q: &ThetaNullVector<Complex64>,
    quads: Vec<Quadric<Complex64>>,
) -> MumfordScheme<Complex64> {
    let k = ComplexField::new(16, 1e-10);
    let mut s = MumfordScheme::new(&q.delta);
    s.quadrics = Some(quads);
    s.origin = Some(q.coords.clone());
    s.degree = Some(8);
    s.inversion = Some(standard_inversion(&k, &q.delta));
    s
}

#[test]
fn mumford_check_on_the_fixture() {
    let k = ComplexField::new(16, 1e-10);
    let q = fixture();
    let tau = Complex64::new(0.3, 1.1);
    let quads: Vec<_> = riemann_relations(&k, &q)
        .into_iter()
        .map(|r| r.quadric)
        .collect();
    let mut s = scheme_for(&q, quads.clone());
    // z ↦ z + 1/8 + τ/8 acts on X(z) as a translation matrix
    let z = Complex64::new(0.11, 0.04);
    let (p, _) = theta_point(&q.delta, &[tau], &[z]).unwrap();
    for (a, l) in [(1u64, 0u64), (0, 1), (3, 5)] {
        let shift = (a as f64 * tau + l as f64) / 8.0;
        let (pt, _) = theta_point(&q.delta, &[tau], &[z + shift]).unwrap();
        s.translation_samples.push(TranslationSample {
            a: vec![a],
            l: vec![l],
            point: p.clone(),
            translated: pt,
        });
    }
    let r = mumford_form_check(&k, &s).unwrap();
    for c in [1, 2, 3, 4, 5] {
        assert_eq!(
            r.verdict(c),
            Verdict::Pass,
            "condition {c}: {}",
            r.conditions[c - 1].detail
        );
    }
    assert!(r.origin_on_scheme);

    let mut bad = quads.clone();
    let first = bad.iter_mut().find(|q| q.terms.len() > 1).unwrap();
    let key = *first.terms.keys().next().unwrap();
    *first.terms.get_mut(&key).unwrap() *= 1.5;
    let r = mumford_form_check(&k, &scheme_for(&q, bad)).unwrap();
    assert_eq!(r.verdict(3), Verdict::Fail);

    let r = mumford_form_check(&k, &scheme_for(&q, Vec::new())).unwrap();
    assert_eq!(r.verdict(2), Verdict::Fail);
    assert_eq!(r.verdict(4), Verdict::NotChecked);
}

#[test]
fn mumford_check_rejects_a_hyperplane_and_a_wrong_degree() {
    let k = ComplexField::new(16, 1e-10);
    let q = fixture();
    // X_0·X_i for all i: the scheme lies in the hyperplane X_0 = 0 up to embedded components
    let quads: Vec<Quadric<Complex64>> = (0..8)
        .map(|i| {
            let mut r = Quadric::zero(8);
            r.add_term(&k, 0, i, &Complex64::new(1.0, 0.0));
            r
        })
        .collect();
    let mut s = scheme_for(&q, quads);
    s.degree = Some(7);
    let r = mumford_form_check(&k, &s).unwrap();
    assert_eq!(r.verdict(1), Verdict::Fail);
    assert_eq!(r.verdict(2), Verdict::Fail);
    s.degree = None;
    assert!(
        matches!(mumford_form_check(&k, &s), Err(Error::IncompleteInput(v)) if v == vec!["degree"])
    );
}

#[test]
fn marking_orbit_properties() {
    let k = ComplexField::new(16, 1e-9);
    let q = fixture();
    let d = d8();
    let id = marking_orbit_of(&k, &q, &[HeisenbergAutomorphism::identity(&d)]).unwrap();
    assert_eq!(id.len(), 1);
    assert!(k.same_point(&id[0], &k.projective_normalize(&q.coords)));

    let inner: Vec<_> = d
        .elements()
        .iter()
        .flat_map(|a| {
            d.elements()
                .into_iter()
                .map(move |l| HeisenbergAutomorphism::inner(&HeisenbergElement::lift(&d8(), a, &l)))
        })
        .collect();
    let from_inner = marking_orbit_of(&k, &q, &inner).unwrap();
    let mut translates: Vec<Vec<Complex64>> = Vec::new();
    for a in d.elements() {
        for l in d.elements() {
            let v = k.projective_normalize(&translation_matrix(&d, &a, &l).apply(&k, &q.coords));
            if !translates.iter().any(|w| k.same_point(w, &v)) {
                translates.push(v);
            }
        }
    }
    assert_eq!(from_inner.len(), translates.len());
    assert!(from_inner
        .iter()
        .all(|v| translates.iter().any(|w| k.same_point(v, w))));

    let orbit = marking_orbit(&k, &q, 24576).unwrap();
    assert_eq!(24576 % orbit.len(), 0, "orbit size {}", orbit.len());
    assert!(orbit.len() >= translates.len());
    for v in orbit.iter().step_by(orbit.len().div_ceil(12)) {
        let p = ThetaNullVector::new(&k, &d, v.clone()).unwrap();
        let worst = riemann_relations(&k, &p)
            .iter()
            .filter(|r| !r.quadric.is_zero())
            .map(|r| relative_value(&r.quadric, v))
            .fold(0.0, f64::max);
        assert!(worst < 1e-8);
    }
    assert!(matches!(marking_orbit(&k, &q, 3), Err(Error::TooLarge(_))));
}

#[test]
fn exact_orbit_matches_complex_orbit_size() {
    // X_0 = 1, other coordinates 0: a point with a large stabilizer, so the exact orbit is small
    let d = d8();
    let k = Cyclotomic::new(16);
    let c = ComplexField::new(16, 1e-9);
    let exact_e0 = (0..8)
        .map(|i| if i == 0 { k.one() } else { k.zero() })
        .collect();
    let approx_e0 = (0..8)
        .map(|i| if i == 0 { c.one() } else { c.zero() })
        .collect();
    let exact = marking_orbit(&k, &ThetaNullVector::new(&k, &d, exact_e0).unwrap(), 24576).unwrap();
    let approx =
        marking_orbit(&c, &ThetaNullVector::new(&c, &d, approx_e0).unwrap(), 24576).unwrap();
    assert_eq!(24576 % exact.len(), 0);
    assert_eq!(exact.len(), approx.len());
    for v in &exact {
        let w: Vec<Complex64> = v.iter().map(|x| k.to_complex(x)).collect();
        assert!(approx
            .iter()
            .any(|u| c.same_point(u, &c.projective_normalize(&w))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn group_law_is_associative(a in prop::array::uniform3(0u64..8), l in prop::array::uniform3(0u64..8), t in prop::array::uniform3(0u64..16)) {
        let d = d8();
        let e: Vec<_> = (0..3).map(|i| HeisenbergElement::new(&d, Unit::root(t[i], 16), &[a[i]], &[l[i]]).unwrap()).collect();
        let lhs = heisenberg_mul(&heisenberg_mul(&e[0], &e[1]).unwrap(), &e[2]).unwrap();
        let rhs = heisenberg_mul(&e[0], &heisenberg_mul(&e[1], &e[2]).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(heisenberg_mul(&e[0], &e[0].inverse()).unwrap(), HeisenbergElement::identity(&d));
    }

    #[test]
    fn pairing_is_the_commutator(a in prop::array::uniform2(0u64..8), l in prop::array::uniform2(0u64..8)) {
        let d = d8();
        let s1 = (vec![a[0]], vec![l[0]]);
        let s2 = (vec![a[1]], vec![l[1]]);
        let x = HeisenbergElement::lift(&d, &s1.0, &s1.1);
        let y = HeisenbergElement::lift(&d, &s2.0, &s2.1);
        let c = heisenberg_mul(&heisenberg_mul(&heisenberg_mul(&y, &x).unwrap(), &y.inverse()).unwrap(), &x.inverse()).unwrap();
        prop_assert!(c.is_central());
        prop_assert_eq!(c.t, Unit::root(commutator_pairing(&d, &s1, &s2), 16));
        prop_assert_eq!(commutator_pairing(&d, &s1, &s1), 0);
        prop_assert_eq!((commutator_pairing(&d, &s1, &s2) + commutator_pairing(&d, &s2, &s1)) % 16, 0);
    }

    #[test]
    fn translations_compose_up_to_the_pairing(a in prop::array::uniform2(0u64..8), l in prop::array::uniform2(0u64..8)) {
        let d = d8();
        let f1 = translation_matrix(&d, &[a[0]], &[l[0]]);
        let f2 = translation_matrix(&d, &[a[1]], &[l[1]]);
        let sum = translation_matrix(&d, &[(a[0] + a[1]) % 8], &[(l[0] + l[1]) % 8]);
        prop_assert!(f1.mul(&f2).projectively_equal(&sum));
        // the two orders differ by the commutator scalar
        let ratio = f1.mul(&f2).mul(&f2.mul(&f1).inverse());
        let e = commutator_pairing(&d, &(vec![a[0]], vec![l[0]]), &(vec![a[1]], vec![l[1]]));
        prop_assert!(ratio.scalar().is_some_and(|u| u.root == e || u.root == (16 - e) % 16));
    }
}
