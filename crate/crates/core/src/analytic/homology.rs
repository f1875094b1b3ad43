//! Integer matrices on H₁ = ker(exp): actions of morphisms, the polarization class of the
//! plane embedding, endomorphisms and automorphisms preserving the polarization.

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::complex::Cx;
use super::elliptic::{ProjPoint, Uniformizer};
use super::periods::PeriodLattice;
use crate::error::{Error, Result};
use crate::exact::matrix::solve;
use crate::exact::rational::{rat, rat_to_f64, BigRat};
use crate::exact::{Matrix, Rationals};

/// Integer matrix acting on coordinate columns in a lattice basis.
pub type IntMat = Vec<Vec<i64>>;

pub fn int_identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn int_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let n = b[0].len();
    a.iter()
        .map(|r| {
            (0..n)
                .map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum())
                .collect()
        })
        .collect()
}

pub fn int_transpose(a: &IntMat) -> IntMat {
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j]).collect())
        .collect()
}

/// A morphism between curve models sending the origin to the origin.
pub trait Morphism: Sync {
    fn apply(&self, p: &ProjPoint) -> Result<ProjPoint>;
}

/// [n] on a curve, through its group law.
pub struct MulBy<'a> {
    pub n: i64,
    pub curve: &'a Uniformizer,
}

impl Morphism for MulBy<'_> {
    fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        Ok(self.curve.mul(self.n, p))
    }
}

/// f ∘ g.
pub struct Compose<'a> {
    pub f: &'a dyn Morphism,
    pub g: &'a dyn Morphism,
}

impl Morphism for Compose<'_> {
    fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        self.f.apply(&self.g.apply(p)?)
    }
}

/// Σ (a + bi)·xⁱyʲ with Gaussian rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussPoly {
    pub terms: Vec<(BigRat, BigRat, u32, u32)>,
}

impl GaussPoly {
    pub fn from_ints(terms: &[(i64, i64, u32, u32)]) -> Self {
        GaussPoly {
            terms: terms
                .iter()
                .map(|&(a, b, i, j)| (rat(a), rat(b), i, j))
                .collect(),
        }
    }

    pub fn eval(&self, x: &Cx, y: &Cx) -> Cx {
        let p = x.prec();
        self.terms.iter().fold(Cx::zero(p), |acc, (a, b, i, j)| {
            let c = Cx::from_rat(p, a, b);
            &acc + &(&(&c * &x.powu(*i)) * &y.powu(*j))
        })
    }
}

/// (x, y) ↦ (Nx/Dx, Ny/Dy), extended by origin ↦ origin.
#[derive(Clone, Debug)]
pub struct PolyMorphism {
    pub nx: GaussPoly,
    pub dx: GaussPoly,
    pub ny: GaussPoly,
    pub dy: GaussPoly,
}

impl PolyMorphism {
    pub fn identity() -> Self {
        let one = GaussPoly::from_ints(&[(1, 0, 0, 0)]);
        PolyMorphism {
            nx: GaussPoly::from_ints(&[(1, 0, 1, 0)]),
            dx: one.clone(),
            ny: GaussPoly::from_ints(&[(1, 0, 0, 1)]),
            dy: one,
        }
    }

    /// The duplication map on Y² = 4X³ − g₂X − g₃ with g₂ = `g2`:
    /// X ↦ ((12x² − g₂)² − 32xy²)/(16y²), Y ↦ −(32y⁴ + (12x² − g₂)((12x² − g₂)² − 48xy²))/(32y³).
    pub fn duplication(g2: i64) -> Self {
        // (12x² − g₂)² = 144x⁴ − 24g₂x² + g₂²
        let nx = GaussPoly::from_ints(&[
            (144, 0, 4, 0),
            (-24 * g2, 0, 2, 0),
            (g2 * g2, 0, 0, 0),
            (-32, 0, 1, 2),
        ]);
        // (12x² − g₂)((12x² − g₂)² − 48xy²) expanded.
        let ny = GaussPoly::from_ints(&[
            (-32, 0, 0, 4),
            (-1728, 0, 6, 0),
            (432 * g2, 0, 4, 0),
            (-36 * g2 * g2, 0, 2, 0),
            (g2 * g2 * g2, 0, 0, 0),
            (576, 0, 3, 2),
            (-48 * g2, 0, 1, 2),
        ]);
        PolyMorphism {
            nx,
            dx: GaussPoly::from_ints(&[(16, 0, 0, 2)]),
            ny,
            dy: GaussPoly::from_ints(&[(32, 0, 0, 3)]),
        }
    }

    /// (x, y) ↦ (−x, iy), an automorphism of y² = a₃x³ + a₁x.
    pub fn times_i() -> Self {
        let one = GaussPoly::from_ints(&[(1, 0, 0, 0)]);
        PolyMorphism {
            nx: GaussPoly::from_ints(&[(-1, 0, 1, 0)]),
            dx: one.clone(),
            ny: GaussPoly::from_ints(&[(0, 1, 0, 1)]),
            dy: one,
        }
    }
}

impl Morphism for PolyMorphism {
    fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        let prec = p.x.prec();
        let Some((x, y)) = p.to_affine() else {
            return Ok(ProjPoint::origin(prec));
        };
        let dx = self.dx.eval(&x, &y);
        let dy = self.dy.eval(&x, &y);
        if dx.is_zero() || dy.is_zero() {
            return Err(Error::InvalidInput(
                "morphism undefined at the sample point".into(),
            ));
        }
        Ok(
            ProjPoint::affine(self.nx.eval(&x, &y).div(&dx), self.ny.eval(&x, &y).div(&dy))
                .normalized(),
        )
    }
}

/// The analytic lift α of a morphism, with an error estimate from two sample points.
pub fn analytic_multiplier(
    f: &dyn Morphism,
    src: &Uniformizer,
    dst: &Uniformizer,
) -> Result<(Cx, f64)> {
    let wp = src.working_precision();
    let dir = Cx::from_f64(wp, 0.3f64.cos(), 0.3f64.sin());
    let mut r = 0.25 * src.ball().radius;
    for _ in 0..12 {
        let z0 = dir.scale_f64(r);
        let z1 = dir.scale_f64(0.5 * r);
        let a0 = dst.log(&f.apply(&src.exp(&z0)?)?).map(|w| w.div(&z0));
        let a1 = dst.log(&f.apply(&src.exp(&z1)?)?).map(|w| w.div(&z1));
        match (a0, a1) {
            (Ok(a0), Ok(a1)) => {
                let err = (&a0 - &a1).abs_f64();
                return Ok((a0, err));
            }
            (Err(Error::OutOfChart), _) | (_, Err(Error::OutOfChart)) => r *= 0.25,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Err(Error::OutOfChart)
}

/// Real coordinates of α·ω_A,j in the basis of `dst`, rounded; returns the matrix and the
/// largest distance to the rounded values.
fn round_action(alpha: &Cx, src: &PeriodLattice, dst: &PeriodLattice) -> (IntMat, f64) {
    let mut m = vec![vec![0i64; 2]; 2];
    let mut dist: f64 = 0.0;
    for j in 0..2 {
        let v = alpha * &src.generators[j].with_prec(alpha.prec());
        let (s, t) = dst.coords(&v);
        for (i, c) in [s.to_f64(), t.to_f64()].into_iter().enumerate() {
            m[i][j] = c.round() as i64;
            dist = dist.max((c - c.round()).abs());
        }
    }
    (m, dist)
}

/// Bound on how far the computed coordinates may be from the true ones.
fn propagated_error(alpha: &Cx, alpha_err: f64, src: &PeriodLattice, dst: &PeriodLattice) -> f64 {
    let wa = src.generators.iter().map(Cx::abs_f64).fold(0.0, f64::max);
    let num = alpha_err * wa
        + alpha.abs_f64() * src.error
        + dst.error * 4.0 * (alpha.abs_f64() * wa / dst.omega1().abs_f64() + 1.0);
    let tau = dst.tau();
    num / (dst.omega1().abs_f64() * tau.im.to_f64().abs().min(1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomologyAction {
    pub matrix: IntMat,
    /// Distance of the computed coordinates to the integers plus the propagated error.
    pub rounding_error: f64,
}

impl HomologyAction {
    pub fn to_json(&self) -> Value {
        json!({"matrix": self.matrix, "rounding_error": self.rounding_error})
    }
}

/// Integer matrix M with α·(ω_A) = (ω_B)·M for the analytic lift α of f.
pub fn homology_action(
    f: &dyn Morphism,
    src: (&Uniformizer, &PeriodLattice),
    dst: (&Uniformizer, &PeriodLattice),
) -> Result<HomologyAction> {
    let (alpha, aerr) = analytic_multiplier(f, src.0, dst.0)?;
    let (matrix, dist) = round_action(&alpha, src.1, dst.1);
    let rounding_error = dist + propagated_error(&alpha, aerr, src.1, dst.1);
    if rounding_error >= 0.5 {
        return Err(Error::RoundingUncertain(rounding_error));
    }
    Ok(HomologyAction {
        matrix,
        rounding_error,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChernClass {
    /// Alternating matrix E_ij = E(ω_i, ω_j).
    pub matrix: IntMat,
    /// ∫ of the pulled-back Fubini–Study form over the torus.
    pub degree: f64,
    pub rounding_error: f64,
    pub grid: usize,
}

impl ChernClass {
    pub fn to_json(&self) -> Value {
        json!({"matrix": self.matrix, "degree": self.degree, "rounding_error": self.rounding_error, "grid": self.grid})
    }
}

/// Density of the Fubini–Study form pulled back along z ↦ (x : y : 1), with dx/dz = y and
/// dy/dz = f′(x)/2: (1/π)·Σ_{i<j}|FᵢF′ⱼ − FⱼF′ᵢ|² / ‖F‖⁴.
fn fs_density(co: &[f64; 4], x: Complex64, y: Complex64) -> f64 {
    let dx = y;
    let dy = (x * x * (3.0 * co[3]) + x * (2.0 * co[2]) + co[1]) * 0.5;
    let minors = [x * dy - y * dx, -dx, -dy];
    let n2 = x.norm_sqr() + y.norm_sqr() + 1.0;
    minors.iter().map(|m| m.norm_sqr()).sum::<f64>() / (n2 * n2) / std::f64::consts::PI
}

fn fs_integral(u: &Uniformizer, lat: &PeriodLattice, n: usize) -> Result<f64> {
    let co = u.curve().coeffs().clone().map(|c| rat_to_f64(&c));
    let wp = u.working_precision();
    let (w1, w2) = (lat.omega1().with_prec(wp), lat.omega2().with_prec(wp));
    let vals: Vec<Result<f64>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (a, b) = ((k / n) as f64 + 0.5, (k % n) as f64 + 0.5);
            let z = &w1.scale_f64(a / n as f64) + &w2.scale_f64(b / n as f64);
            let p = u.exp(&z)?;
            let (x, y) = p
                .to_affine()
                .ok_or_else(|| Error::PrecisionExhausted("mesh point hit the origin".into()))?;
            let (x, y) = (x.to_f64(), y.to_f64());
            Ok(fs_density(
                &co,
                Complex64::new(x.0, x.1),
                Complex64::new(y.0, y.1),
            ))
        })
        .collect();
    let mut sum = 0.0;
    for v in vals {
        sum += v?;
    }
    Ok(sum * lat.area() / (n * n) as f64)
}

/// The class of the hyperplane bundle of the plane embedding as an alternating form on H₁,
/// by the periodic midpoint rule, refined until successive grids agree.
pub fn chern_class(u: &Uniformizer, lat: &PeriodLattice) -> Result<ChernClass> {
    let mut n = 16;
    let mut prev = fs_integral(u, lat, n)?;
    loop {
        n *= 2;
        let cur = fs_integral(u, lat, n)?;
        let est = (cur - prev).abs();
        if est < 1e-6 || n >= 256 {
            let w = (&lat.omega1().conj() * lat.omega2()).im.to_f64() / lat.area();
            let e12 = cur * w;
            let r = e12.round();
            let rounding_error = (e12 - r).abs() + est;
            if rounding_error >= 0.5 {
                return Err(Error::RoundingUncertain(rounding_error));
            }
            let r = r as i64;
            return Ok(ChernClass {
                matrix: vec![vec![0, r], vec![-r, 0]],
                degree: cur,
                rounding_error,
                grid: n,
            });
        }
        prev = cur;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EndomorphismRing {
    /// ℤ-basis of the multipliers acting on H₁, starting with the identity.
    pub basis: Vec<IntMat>,
    /// Discriminant B² − 4AC of the quadratic relation of τ, when there is one.
    pub discriminant: Option<i64>,
    /// Coefficient bound of the relation search.
    pub search_bound: i64,
    pub rounding_error: f64,
}

impl EndomorphismRing {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self) -> Value {
        json!({"rank": self.rank(), "basis": self.basis, "discriminant": self.discriminant, "search_bound": self.search_bound, "rounding_error": self.rounding_error})
    }
}

pub const END_SEARCH_BOUND: i64 = 60;

/// {α : αΛ ⊆ Λ} as integer matrices: ℤ, or ℤ[Aτ] when Aτ² + Bτ + C = 0 with
/// gcd(A, B, C) = 1 and coefficients up to the search bound.
pub fn endomorphism_ring(lat: &PeriodLattice) -> Result<EndomorphismRing> {
    let tol =
        (1e4 * lat.error / lat.omega1().abs_f64()).max(2f64.powi(-(lat.precision as i32) / 2));
    if tol > 1e-8 {
        return Err(Error::PrecisionExhausted(format!(
            "lattice error {:.1e} too large for the multiplier search",
            lat.error
        )));
    }
    let tau = lat.tau();
    let tau2 = tau.sqr();
    let h = END_SEARCH_BOUND;
    for a in 1..=h {
        for b in -h..=h {
            let r = &tau2.scale_f64(a as f64) + &tau.scale_f64(b as f64);
            let c = -r.re.to_f64().round();
            if c.abs() > h as f64 || a.gcd(&b).gcd(&(c as i64)) != 1 {
                continue;
            }
            let res = &r + &Cx::from_f64(r.prec(), c, 0.0);
            if res.abs_f64() <= tol * (1.0 + r.abs_f64()) {
                let c = c as i64;
                let alpha = tau.scale_f64(a as f64);
                let (m, dist) = round_action(&alpha, lat, lat);
                let expected = vec![vec![0, -c], vec![a, -b]];
                if m != expected || dist >= 0.5 {
                    return Err(Error::RoundingUncertain(dist));
                }
                return Ok(EndomorphismRing {
                    basis: vec![int_identity(2), m],
                    discriminant: Some(b * b - 4 * a * c),
                    search_bound: h,
                    rounding_error: dist,
                });
            }
        }
    }
    Ok(EndomorphismRing {
        basis: vec![int_identity(2)],
        discriminant: None,
        search_bound: h,
        rounding_error: 0.0,
    })
}

fn in_span(basis: &[IntMat], u: &IntMat) -> bool {
    let cols: Vec<Vec<BigRat>> = basis
        .iter()
        .map(|m| m.iter().flatten().map(|&x| rat(x)).collect())
        .collect();
    let a = Matrix::from_fn(4, cols.len(), |i, j| cols[j][i].clone());
    let b: Vec<BigRat> = u.iter().flatten().map(|&x| rat(x)).collect();
    solve(&Rationals, &a, &b).map_or(false, |x| x.iter().all(|c| c.is_integer()))
}

/// Endomorphisms u with uᵀEu = E. They preserve the positive form H(v) = ±E(v, Iv), so each
/// column uⱼ satisfies H(uⱼ) = H(eⱼ); the finitely many such columns are tested exhaustively.
pub fn polarized_automorphisms(
    lat: &PeriodLattice,
    pairing: &IntMat,
    end: &EndomorphismRing,
) -> Result<Vec<IntMat>> {
    let wp = lat.omega1().prec();
    // Columns of I: coordinates of i·ω_j.
    let i = Cx::i(wp);
    let mut im = [[0.0f64; 2]; 2];
    for j in 0..2 {
        let (s, t) = lat.coords(&(&i * &lat.generators[j]));
        im[0][j] = s.to_f64();
        im[1][j] = t.to_f64();
    }
    let e: [[f64; 2]; 2] = [
        [pairing[0][0] as f64, pairing[0][1] as f64],
        [pairing[1][0] as f64, pairing[1][1] as f64],
    ];
    let mut h = [[0.0f64; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            h[r][c] = (0..2).map(|k| e[r][k] * im[k][c]).sum();
        }
    }
    let sym = |r: usize, c: usize| 0.5 * (h[r][c] + h[c][r]);
    let mut s = [[sym(0, 0), sym(0, 1)], [sym(1, 0), sym(1, 1)]];
    if s[0][0] < 0.0 {
        s = s.map(|r| r.map(|x| -x));
    }
    let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    if s[0][0] <= 0.0 || det <= 1e-9 {
        return Err(Error::InvalidInput(
            "pairing does not give a positive definite form".into(),
        ));
    }
    let tr = s[0][0] + s[1][1];
    let lmin = 0.5 * (tr - (tr * tr - 4.0 * det).max(0.0).sqrt());
    let q = |x: &[i64; 2]| {
        s[0][0] * (x[0] * x[0]) as f64
            + 2.0 * s[0][1] * (x[0] * x[1]) as f64
            + s[1][1] * (x[1] * x[1]) as f64
    };
    let columns: Vec<Vec<[i64; 2]>> = (0..2)
        .map(|j| {
            let target = s[j][j];
            let bound = (target / lmin).sqrt().ceil() as i64 + 1;
            let mut v = Vec::new();
            for a in -bound..=bound {
                for b in -bound..=bound {
                    let x = [a, b];
                    if (q(&x) - target).abs() <= 1e-6 * target {
                        v.push(x);
                    }
                }
            }
            v
        })
        .collect();
    let mut out = Vec::new();
    for c0 in &columns[0] {
        for c1 in &columns[1] {
            let u = vec![vec![c0[0], c1[0]], vec![c0[1], c1[1]]];
            if int_mul(&int_mul(&int_transpose(&u), pairing), &u) == *pairing
                && in_span(&end.basis, &u)
            {
                out.push(u);
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_matrix_helpers() {
        let m = vec![vec![0, -1], vec![1, 0]];
        assert_eq!(int_mul(&m, &m), vec![vec![-1, 0], vec![0, -1]]);
        assert_eq!(int_transpose(&m), vec![vec![0, 1], vec![-1, 0]]);
        assert!(in_span(
            &[int_identity(2), m.clone()],
            &vec![vec![3, -2], vec![2, 3]]
        ));
        assert!(!in_span(&[int_identity(2)], &m));
    }

    #[test]
    fn gaussian_polynomial_evaluation() {
        let p = GaussPoly::from_ints(&[(0, 1, 0, 1), (2, 0, 2, 0)]);
        let v = p.eval(&Cx::from_f64(64, 1.0, 0.0), &Cx::from_f64(64, 3.0, 0.0));
        assert_eq!(v.to_f64(), (2.0, 3.0));
    }
}
