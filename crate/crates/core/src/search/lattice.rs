//! Full-rank lattices in ℝⁿ: covering points and generating sets inside balls.
//!
//! Basis entries are taken as exact rationals (finite `f64` inputs convert exactly), so all
//! distance comparisons that decide membership in a ball can be settled exactly.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::intmat::{hnf_basis, smith_normal_form};
use crate::exact::matrix::{determinant, inverse, mat_vec, rank, Matrix};
use crate::exact::rational::{rat, rat_from_f64, rat_to_f64, BigRat};
use crate::exact::Rationals;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EuclideanLattice {
    /// n×n, columns are the generators.
    basis: Matrix<BigRat>,
    /// Working precision of the inputs in bits.
    pub precision: u32,
}

/// A lattice vector with its integer coordinates in the basis and its exact position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub coords: Vec<BigInt>,
    pub point: Vec<BigRat>,
}

impl LatticePoint {
    pub fn point_f64(&self) -> Vec<f64> {
        self.point.iter().map(rat_to_f64).collect()
    }
}

impl EuclideanLattice {
    /// Builds a lattice from generator columns given as floats.
    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let n = cols.len();
        if n == 0 || cols.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidInput(
                "basis must be n generators in R^n".into(),
            ));
        }
        if cols.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("basis entries must be finite".into()));
        }
        let basis = Matrix::from_fn(n, n, |i, j| rat_from_f64(cols[j][i]));
        Self::from_rational(basis, 53)
    }

    pub fn from_rational(basis: Matrix<BigRat>, precision: u32) -> Result<Self> {
        if basis.rows() != basis.cols() || basis.rows() == 0 {
            return Err(Error::InvalidInput("basis must be square".into()));
        }
        if determinant(&Rationals, &basis).is_zero() {
            return Err(Error::InvalidInput(
                "basis columns are linearly dependent".into(),
            ));
        }
        Ok(EuclideanLattice { basis, precision })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix<BigRat> {
        &self.basis
    }

    pub fn point(&self, coords: &[BigInt]) -> LatticePoint {
        let c: Vec<BigRat> = coords
            .iter()
            .map(|x| BigRat::from_integer(x.clone()))
            .collect();
        LatticePoint {
            coords: coords.to_vec(),
            point: mat_vec(&Rationals, &self.basis, &c),
        }
    }

    fn dist2(p: &[BigRat], w: &[BigRat]) -> BigRat {
        p.iter().zip(w).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    /// Float candidates for the ball with their float squared distances, and the slack
    /// within which a float comparison is not trusted.
    fn ball_candidates(&self, w: &[BigRat], r2: &BigRat) -> (Vec<(Vec<i64>, f64)>, f64) {
        let n = self.dim();
        let b: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| rat_to_f64(self.basis.get(i, j))).collect())
            .collect();
        let inv = inverse(&Rationals, &self.basis).expect("full rank");
        let u: Vec<f64> = mat_vec(&Rationals, &inv, w)
            .iter()
            .map(rat_to_f64)
            .collect();
        let r2f = rat_to_f64(r2);
        let wf: Vec<f64> = w.iter().map(rat_to_f64).collect();
        let wn: f64 = wf.iter().map(|x| x * x).sum();
        let slack = 1e-9 * (r2f + wn + 1.0);
        let out = fincke_pohst(&b, &u, r2f + slack)
            .into_iter()
            .filter_map(|c| {
                let pf: Vec<f64> = (0..n)
                    .map(|i| (0..n).map(|j| b[i][j] * c[j] as f64).sum::<f64>())
                    .collect();
                let d2f: f64 = pf.iter().zip(&wf).map(|(a, b)| (a - b).powi(2)).sum();
                (d2f <= r2f + slack).then_some((c, d2f))
            })
            .collect();
        (out, slack)
    }

    /// All lattice points within squared distance `r2` of `w` (exact).
    pub fn points_in_ball(&self, w: &[BigRat], r2: &BigRat) -> Vec<LatticePoint> {
        let r2f = rat_to_f64(r2);
        let (cands, slack) = self.ball_candidates(w, r2);
        let mut out = Vec::new();
        for (c, d2f) in cands {
            let coords: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
            let p = self.point(&coords);
            if d2f < r2f - slack || &Self::dist2(&p.point, w) <= r2 {
                out.push(p);
            }
        }
        out.sort_by(|a, b| a.point.cmp(&b.point));
        out
    }

    /// The points of the ball nearest to `w`, decided exactly among float near-ties.
    fn nearest_in_ball(&self, w: &[BigRat], r2: &BigRat) -> Option<LatticePoint> {
        let (cands, slack) = self.ball_candidates(w, r2);
        let best = cands.iter().map(|(_, d)| *d).fold(f64::INFINITY, f64::min);
        cands
            .into_iter()
            .filter(|(_, d)| *d <= best + slack)
            .map(|(c, _)| self.point(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()))
            .map(|p| (Self::dist2(&p.point, w), p))
            .filter(|(d, _)| d <= r2)
            .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.point.cmp(&b.1.point)))
            .map(|(_, p)| p)
    }

    /// Checks that the ball of squared radius `r2` about 0 contains n independent vectors.
    fn check_independent(&self, r2: &BigRat) -> Result<()> {
        let n = self.dim();
        let zero = vec![BigRat::zero(); n];
        let mut independent: Vec<Vec<BigRat>> = Vec::with_capacity(n);
        for p in self.points_in_ball(&zero, r2) {
            let mut rows = independent.clone();
            rows.push(
                p.coords
                    .iter()
                    .map(|x| BigRat::from_integer(x.clone()))
                    .collect(),
            );
            if rank(&Rationals, &Matrix::from_rows(rows.clone(), n)) == rows.len() {
                independent = rows;
                if independent.len() == n {
                    return Ok(());
                }
            }
        }
        Err(Error::InsufficientRadius(format!(
            "ball of radius {:.6} holds fewer than {} independent lattice vectors",
            rat_to_f64(r2).sqrt(),
            n
        )))
    }
}

/// Integer vectors c with ‖B(c − u)‖² ≤ r2 (floating-point bounds; callers re-check).
fn fincke_pohst(b: &[Vec<f64>], u: &[f64], r2: f64) -> Vec<Vec<i64>> {
    let n = u.len();
    let g: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| b[k][i] * b[k][j]).sum())
                .collect()
        })
        .collect();
    let mut q = vec![0.0; n];
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        q[i] = g[i][i] - (0..i).map(|k| mu[k][i] * mu[k][i] * q[k]).sum::<f64>();
        for j in i + 1..n {
            mu[i][j] = (g[i][j] - (0..i).map(|k| mu[k][i] * mu[k][j] * q[k]).sum::<f64>()) / q[i];
        }
    }
    let mut out = Vec::new();
    let mut c = vec![0i64; n];
    recurse(n, &q, &mu, u, r2, &mut c, &mut out);
    out
}

fn recurse(
    level: usize,
    q: &[f64],
    mu: &[Vec<f64>],
    u: &[f64],
    budget: f64,
    c: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if level == 0 {
        out.push(c.clone());
        return;
    }
    let i = level - 1;
    let n = u.len();
    let center = u[i]
        - (i + 1..n)
            .map(|j| mu[i][j] * (c[j] as f64 - u[j]))
            .sum::<f64>();
    let half = (budget.max(0.0) / q[i]).sqrt();
    let lo = (center - half).ceil() as i64;
    let hi = (center + half).floor() as i64;
    for x in lo..=hi {
        let t = x as f64 - center;
        let rest = budget - q[i] * t * t;
        if rest < -1e-12 * budget.abs().max(1.0) {
            continue;
        }
        c[i] = x;
        recurse(i, q, mu, u, rest, c, out);
    }
    c[i] = 0;
}

/// A lattice point within r·√n/2 of `w`: the nearest one, ties broken by lexicographic order
/// of the ambient coordinates.
pub fn covering_point(lat: &EuclideanLattice, w: &[f64], r: f64) -> Result<LatticePoint> {
    let n = lat.dim();
    if w.len() != n || !r.is_finite() || r <= 0.0 {
        return Err(Error::InvalidInput(
            "target dimension or radius invalid".into(),
        ));
    }
    let rr = rat_from_f64(r);
    let r2 = &rr * &rr;
    lat.check_independent(&r2)?;
    let wq: Vec<BigRat> = w.iter().map(|&x| rat_from_f64(x)).collect();
    let bound2 = &r2 * rat(n as i64) / rat(4);
    lat.nearest_in_ball(&wq, &bound2).ok_or_else(|| {
        Error::InsufficientRadius("no lattice point within the covering bound".into())
    })
}

/// b_n² = max(1, n/4).
pub fn generation_factor_sq(n: usize) -> BigRat {
    std::cmp::max(BigRat::one(), rat(n as i64) / rat(4))
}

/// All nonzero lattice vectors of length at most max(1, √n/2)·r, checked to generate.
pub fn generators_in_ball(lat: &EuclideanLattice, r: f64) -> Result<Vec<LatticePoint>> {
    let n = lat.dim();
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    let rr = rat_from_f64(r);
    let r2 = &rr * &rr;
    lat.check_independent(&r2)?;
    let zero = vec![BigRat::zero(); n];
    let mut pts: Vec<LatticePoint> = lat
        .points_in_ball(&zero, &(&r2 * generation_factor_sq(n)))
        .into_iter()
        .filter(|p| p.coords.iter().any(|x| !x.is_zero()))
        .collect();
    pts.sort_by_cached_key(|p| (EuclideanLattice::dist2(&p.point, &zero), p.point.clone()));
    if !generates(&pts.iter().map(|p| p.coords.clone()).collect::<Vec<_>>(), n) {
        return Err(Error::InsufficientRadius(
            "vectors in the ball do not generate the lattice".into(),
        ));
    }
    Ok(pts)
}

/// Index-1 check: the integer row vectors span ℤⁿ. Rows are folded into a running Hermite
/// basis so long lists stop as soon as the index reaches 1.
pub fn generates(coords: &[Vec<BigInt>], n: usize) -> bool {
    if coords.len() < n {
        return false;
    }
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for chunk in coords.chunks(4 * n.max(1)) {
        let mut rows = basis.clone();
        rows.extend(chunk.iter().cloned());
        let h = hnf_basis(&Matrix::from_rows(rows, n));
        basis = h.to_rows();
        if basis.len() == n && (0..n).all(|i| basis[i][i].abs().is_one()) {
            let d = smith_normal_form(&h);
            return d.iter().all(|x| x.abs().is_one());
        }
    }
    false
}

/// Squared Euclidean length as a float.
pub fn norm2_f64(p: &LatticePoint) -> f64 {
    p.point.iter().map(|x| rat_to_f64(x).powi(2)).sum()
}

pub fn coords_i64(p: &LatticePoint) -> Vec<i64> {
    p.coords
        .iter()
        .map(|x| x.to_i64().unwrap_or(i64::MAX))
        .collect()
}
