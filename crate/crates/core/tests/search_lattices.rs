use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toolkit_core::exact::intmat::hnf_basis;
use toolkit_core::exact::matrix::{inverse, Matrix};
use toolkit_core::exact::rational::{rat, rat_to_f64};
use toolkit_core::exact::Rationals;
use toolkit_core::search::{
    covering_point, decimal_codec, enumerate_bounded, generators_in_ball, EuclideanLattice,
    SearchSpace, DECIMAL_ALPHABET,
};

/// Every lattice point whose coordinates lie in a box of half-width `k`.
fn box_points(cols: &[Vec<f64>], k: i64) -> Vec<(Vec<i64>, Vec<f64>)> {
    let n = cols.len();
    let mut out = Vec::new();
    let mut c = vec![-k; n];
    loop {
        let p: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| c[j] as f64 * cols[j][i]).sum())
            .collect();
        out.push((c.clone(), p));
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            c[i] += 1;
            if c[i] <= k {
                break;
            }
            c[i] = -k;
            i += 1;
        }
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Box half-width guaranteeing every point within `radius` of `w` is inside.
fn coordinate_box(cols: &[Vec<f64>], w: &[f64], radius: f64) -> Option<i64> {
    let n = cols.len();
    let b = Matrix::from_fn(n, n, |i, j| rat(cols[j][i] as i64));
    let inv = inverse(&Rationals, &b)?;
    let opnorm: f64 = inv
        .entries()
        .iter()
        .map(|x| rat_to_f64(x).powi(2))
        .sum::<f64>()
        .sqrt();
    let center: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| rat_to_f64(inv.get(i, j)) * w[j]).sum())
        .collect();
    let k = center.iter().map(|x| x.abs()).fold(0.0, f64::max) + opnorm * radius;
    (k < 12.0).then(|| k.ceil() as i64)
}

fn random_lattice(rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    loop {
        let n = rng.gen_range(1..=4);
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-5i64..=5) as f64).collect())
            .collect();
        if EuclideanLattice::from_columns(&cols).is_ok() {
            return cols;
        }
    }
}

#[test]
fn covering_and_generation_on_random_lattices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut oracle_checked = 0;
    for _ in 0..200 {
        let cols = random_lattice(&mut rng);
        let n = cols.len();
        let lat = EuclideanLattice::from_columns(&cols).unwrap();
        // Slightly above the longest basis column so that float rounding of the square root
        // cannot push a basis vector outside the ball.
        let r = cols
            .iter()
            .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
            * (1.0 + 1e-12);
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let p = covering_point(&lat, &w, r).unwrap();
        let d = dist(&p.point_f64(), &w);
        assert!(d <= r * (n as f64).sqrt() / 2.0 + 1e-9);
        if let Some(k) = coordinate_box(&cols, &w, d + 1e-9) {
            let best = box_points(&cols, k)
                .iter()
                .map(|(_, q)| dist(q, &w))
                .fold(f64::INFINITY, f64::min);
            assert!((best - d).abs() < 1e-9, "not the nearest point");
            oracle_checked += 1;
        }

        let gens = generators_in_ball(&lat, r).unwrap();
        let bound = (1f64).max((n as f64).sqrt() / 2.0) * r;
        assert!(gens
            .iter()
            .all(|g| dist(&g.point_f64(), &vec![0.0; n]) <= bound + 1e-9));
        let coords = Matrix::from_rows(gens.iter().map(|g| g.coords.clone()).collect(), n);
        let h = hnf_basis(&coords);
        assert_eq!(
            h,
            Matrix::from_fn(n, n, |i, j| if i == j {
                BigInt::one()
            } else {
                BigInt::from(0)
            })
        );
    }
    assert!(oracle_checked > 100);
}

#[test]
fn two_z_by_z_generators_within_two() {
    let lat = EuclideanLattice::from_columns(&[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let got: Vec<Vec<f64>> = generators_in_ball(&lat, 2.0)
        .unwrap()
        .iter()
        .map(|p| p.point_f64())
        .collect();
    let mut expected: Vec<Vec<f64>> = box_points(&[vec![2.0, 0.0], vec![0.0, 1.0]], 3)
        .into_iter()
        .map(|(_, p)| p)
        .filter(|p| p.iter().any(|x| *x != 0.0) && dist(p, &[0.0, 0.0]) <= 2.0)
        .collect();
    expected.sort_by(|a, b| {
        dist(a, &[0.0, 0.0])
            .partial_cmp(&dist(b, &[0.0, 0.0]))
            .unwrap()
            .then(a.partial_cmp(b).unwrap())
    });
    assert_eq!(expected.len(), 6);
    assert_eq!(got, expected);
}

#[test]
fn covering_in_one_dimension_matches_scan() {
    let lat = EuclideanLattice::from_columns(&[vec![1.0]]).unwrap();
    let p = covering_point(&lat, &[0.4], 1.0).unwrap();
    let scan = (-3..=3)
        .map(|k| k as f64)
        .min_by(|a, b| (a - 0.4).abs().partial_cmp(&(b - 0.4).abs()).unwrap())
        .unwrap();
    assert_eq!(p.point_f64(), vec![scan]);
    assert_eq!(p.point_f64(), vec![0.0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn enumeration_is_monotone_in_h(m in 1i64..20, c in 0i64..20, h in 0usize..3) {
        let pred = move |x: &i64| x.rem_euclid(m) == c % m;
        let small = enumerate_bounded(&SearchSpace::new(decimal_codec, pred, h).with_alphabet(DECIMAL_ALPHABET));
        let big = enumerate_bounded(&SearchSpace::new(decimal_codec, pred, h + 1).with_alphabet(DECIMAL_ALPHABET));
        prop_assert!(small.iter().all(|x| big.contains(x)));
        prop_assert!(big.starts_with(&small));
    }
}
