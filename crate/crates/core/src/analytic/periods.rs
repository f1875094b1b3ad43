//! The kernel of exp, found by sweeping a mesh: for a mesh point z with exp(z) in the
//! chart, z − log(exp z) is a period.

use rayon::prelude::*;
use rug::Float;
use serde_json::{json, Value};

use super::complex::Cx;
use super::curve::CurveModel;
use super::elliptic::{ProjPoint, Uniformizer};
use crate::error::{Error, Result};
use crate::search::lattice::{generators_in_ball, EuclideanLattice};

/// Mesh rings swept before giving up.
const MAX_RINGS: i64 = 400;

#[derive(Clone, Debug)]
pub struct PeriodLattice {
    /// ω₁, ω₂ with Im(ω₂/ω₁) > 0.
    pub generators: Vec<Cx>,
    /// Bits of the requested precision.
    pub precision: u32,
    /// Error bound per generator, estimated against a recomputation with 32 more bits.
    pub error: f64,
    /// Number of lattice vectors returned by `generators_in_ball` at radius |ω₂|.
    pub ball_generators: usize,
    /// Number of distinct periods met by the mesh.
    pub mesh_periods: usize,
}

fn real_coords(w1: &Cx, w2: &Cx, z: &Cx) -> (Float, Float) {
    let tau = w2.div(w1);
    let q = z.div(w1);
    let t = Float::with_val(z.prec(), &q.im / &tau.im);
    let s = q.re - Float::with_val(z.prec(), &t * &tau.re);
    (s, t)
}

fn combo(w1: &Cx, w2: &Cx, a: i64, b: i64) -> Cx {
    &w1.scale_f64(a as f64) + &w2.scale_f64(b as f64)
}

impl PeriodLattice {
    pub fn omega1(&self) -> &Cx {
        &self.generators[0]
    }

    pub fn omega2(&self) -> &Cx {
        &self.generators[1]
    }

    pub fn tau(&self) -> Cx {
        self.omega2().div(self.omega1())
    }

    /// |Im(ω̄₁ω₂)|, the covolume.
    pub fn area(&self) -> f64 {
        (&self.omega1().conj() * self.omega2()).im.to_f64().abs()
    }

    /// Real coordinates (s, t) with z = sω₁ + tω₂.
    pub fn coords(&self, z: &Cx) -> (Float, Float) {
        real_coords(self.omega1(), self.omega2(), z)
    }

    pub fn combination(&self, a: i64, b: i64) -> Cx {
        combo(self.omega1(), self.omega2(), a, b)
    }

    /// The representative of z modulo the lattice closest to 0.
    pub fn reduce(&self, z: &Cx) -> Cx {
        let (s, t) = self.coords(z);
        let (a, b) = (s.to_f64().round() as i64, t.to_f64().round() as i64);
        let mut best = z - &self.combination(a, b);
        for da in -1..=1 {
            for db in -1..=1 {
                let cand = z - &self.combination(a + da, b + db);
                if cand.abs_f64() < best.abs_f64() - 1e-12 {
                    best = cand;
                }
            }
        }
        best
    }

    /// Smallest positive real period, if the lattice contains real vectors.
    pub fn real_period(&self) -> Option<Float> {
        let mut best: Option<Cx> = None;
        for a in -3..=3 {
            for b in -3..=3 {
                let v = self.combination(a, b);
                let n = v.abs_f64();
                if n > 0.0
                    && v.im.to_f64().abs() <= 1e-9 * n
                    && v.re.is_sign_positive()
                    && best.as_ref().map_or(true, |w| v.abs_f64() < w.abs_f64())
                {
                    best = Some(v);
                }
            }
        }
        best.map(|v| v.re)
    }

    /// The same lattice with basis (ω₁, ω₂)·U, U ∈ GL₂(ℤ) given by rows.
    pub fn with_basis(&self, u: [[i64; 2]; 2]) -> Result<Self> {
        if (u[0][0] * u[1][1] - u[0][1] * u[1][0]).abs() != 1 {
            return Err(Error::InvalidInput(
                "basis change must be unimodular".into(),
            ));
        }
        let g = (0..2).map(|j| self.combination(u[0][j], u[1][j])).collect();
        Ok(PeriodLattice {
            generators: g,
            ..self.clone()
        })
    }

    pub fn to_json(&self) -> Value {
        // enough digits to carry every requested bit
        let digits = (self.precision as f64 * std::f64::consts::LOG10_2).ceil() as usize + 3;
        let fmt = |c: &Cx| {
            json!([
                c.re.to_string_radix(10, Some(digits)),
                c.im.to_string_radix(10, Some(digits))
            ])
        };
        let tau = self.tau();
        json!({
            "generators": self.generators.iter().map(fmt).collect::<Vec<_>>(),
            "tau": fmt(&tau),
            "real_period": self.real_period().map(|r| r.to_string_radix(10, Some(digits))),
            "precision_bits": self.precision,
            "error": self.error,
            "ball_generators": self.ball_generators,
        })
    }
}

/// Square rings of the mesh ℤ²·s, ring k being the points with max(|i|, |j|) = k.
fn ring(k: i64) -> Vec<(i64, i64)> {
    if k == 0 {
        return vec![(0, 0)];
    }
    let mut v = Vec::with_capacity(8 * k as usize);
    for i in -k..=k {
        v.push((i, -k));
        v.push((i, k));
    }
    for j in -k + 1..k {
        v.push((-k, j));
        v.push((k, j));
    }
    v
}

/// z − log(exp z) when exp z lies in the chart.
fn period_at(u: &Uniformizer, z: &Cx) -> Result<Option<Cx>> {
    let p = u.exp(z)?;
    match u.chart_coordinate(&p) {
        Some(t) if t.abs_f64() <= u.ball().image_radius => {}
        _ => return Ok(None),
    }
    match u.log(&p) {
        Ok(w) => Ok(Some(z - &w)),
        Err(Error::OutOfChart) => Ok(None),
        Err(e) => Err(e),
    }
}

struct Found {
    lambda: Cx,
    source: Cx,
}

/// Shortest vector (largest real part among ties), then the shortest independent one with
/// Im(ω₂/ω₁) > 0 (largest Re(ω₂/ω₁) among ties).
fn reduced_pair(found: &[Found]) -> Option<(usize, usize)> {
    let len = |i: usize| found[i].lambda.abs_f64();
    let nz: Vec<usize> = (0..found.len()).filter(|&i| len(i) > 0.0).collect();
    let m1 = nz.iter().map(|&i| len(i)).fold(f64::INFINITY, f64::min);
    let i1 = *nz
        .iter()
        .filter(|&&i| len(i) <= m1 * (1.0 + 1e-9))
        .max_by(|&&a, &&b| {
            let (x, y) = (found[a].lambda.to_f64(), found[b].lambda.to_f64());
            x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1))
        })?;
    let w1 = &found[i1].lambda;
    let ratio = |i: usize| found[i].lambda.div(w1).to_f64();
    let indep: Vec<usize> = nz.iter().copied().filter(|&i| ratio(i).1 > 1e-6).collect();
    let m2 = indep.iter().map(|&i| len(i)).fold(f64::INFINITY, f64::min);
    let i2 = *indep
        .iter()
        .filter(|&&i| len(i) <= m2 * (1.0 + 1e-9))
        .max_by(|&&a, &&b| ratio(a).0.total_cmp(&ratio(b).0))?;
    Some((i1, i2))
}

/// Generators of ker(exp) for the curve, certified by exhausting a disk of radius |ω₂|.
pub fn period_lattice(c: &CurveModel, prec: u32) -> Result<PeriodLattice> {
    let u = Uniformizer::new(c, prec)?;
    let b = u.ball().radius;
    let s = 0.95 * b * std::f64::consts::SQRT_2;
    let wp = u.working_precision();
    let mut found: Vec<Found> = Vec::new();
    for k in 0..=MAX_RINGS {
        let pts = ring(k);
        let res: Vec<Result<Option<(Cx, Cx)>>> = pts
            .par_iter()
            .map(|&(i, j)| {
                let z = Cx::from_f64(wp, i as f64 * s, j as f64 * s);
                Ok(period_at(&u, &z)?.map(|l| (l, z)))
            })
            .collect();
        for r in res {
            if let Some((lambda, source)) = r? {
                if found
                    .iter()
                    .all(|f| (&f.lambda - &lambda).abs_f64() > 0.5 * b)
                {
                    found.push(Found { lambda, source });
                }
            }
        }
        let covered = (k as f64 - 0.5) * s;
        if let Some((i1, i2)) = reduced_pair(&found) {
            if found[i2].lambda.abs_f64() <= covered {
                return finish(c, &u, &found, i1, i2);
            }
        }
    }
    Err(Error::PrecisionExhausted(format!(
        "no period basis within {MAX_RINGS} mesh rings"
    )))
}

fn finish(
    c: &CurveModel,
    u: &Uniformizer,
    found: &[Found],
    i1: usize,
    i2: usize,
) -> Result<PeriodLattice> {
    let (w1, w2) = (found[i1].lambda.clone(), found[i2].lambda.clone());
    // Every period met must be an integer combination of the basis.
    for f in found {
        let (s, t) = real_coords(&w1, &w2, &f.lambda);
        let (s, t) = (s.to_f64(), t.to_f64());
        if (s - s.round()).abs() > 1e-6 || (t - t.round()).abs() > 1e-6 {
            return Err(Error::PrecisionExhausted(
                "mesh periods are not integral in the reduced basis".into(),
            ));
        }
    }
    let fine = Uniformizer::with_working_precision(c, u.precision(), u.working_precision() + 32)?;
    let mut error = 0.0f64;
    for (f, w) in [(&found[i1], &w1), (&found[i2], &w2)] {
        let z = f.source.with_prec(fine.working_precision());
        let l2 = period_at(&fine, &z)?
            .ok_or_else(|| Error::PrecisionExhausted("period lost at higher precision".into()))?;
        error = error.max(2.0 * (&l2 - &w.with_prec(fine.working_precision())).abs_f64());
    }
    error = error.max(2f64.powi(-(u.precision() as i32)) * w2.abs_f64());
    let cols = [w1.to_f64(), w2.to_f64()].map(|(x, y)| vec![x, y]);
    let lat = EuclideanLattice::from_columns(&cols)?;
    let gens = generators_in_ball(&lat, w2.abs_f64() * (1.0 + 1e-9))?;
    let prec = u.precision();
    Ok(PeriodLattice {
        generators: vec![w1.with_prec(prec), w2.with_prec(prec)],
        precision: prec,
        error,
        ball_generators: gens.len(),
        mesh_periods: found.len(),
    })
}

/// exp⁻¹(p) modulo the lattice, for any point: z + log(p − exp z) for a mesh point z with
/// p − exp z in the chart, reduced to the representative closest to 0.
pub fn log_point_global(u: &Uniformizer, lat: &PeriodLattice, p: &ProjPoint) -> Result<Cx> {
    match u.log(p) {
        Ok(z) => return Ok(lat.reduce(&z)),
        Err(Error::OutOfChart) => {}
        Err(e) => return Err(e),
    }
    let b = u.ball().radius;
    let (w1, w2) = (lat.omega1(), lat.omega2());
    let m = ((w1.abs_f64() + w2.abs_f64()) / (2.0 * 0.95 * b)).ceil() as i64;
    let wp = u.working_precision();
    for a in 0..m {
        for bb in 0..m {
            let z = (&w1.scale_frac(a, m as u64) + &w2.scale_frac(bb, m as u64)).with_prec(wp);
            let q = u.add(p, &u.neg(&u.exp(&z)?));
            match u.log(&q) {
                Ok(w) => return Ok(lat.reduce(&(&z + &w))),
                Err(Error::OutOfChart) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Err(Error::PrecisionExhausted(
        "no mesh point brings the target into the chart".into(),
    ))
}

/// τ moved into the standard fundamental domain |Re τ| ≤ 1/2, |τ| ≥ 1 by SL₂(ℤ).
pub fn reduce_tau(tau: &Cx) -> Cx {
    let mut t = tau.clone();
    for _ in 0..200 {
        let shift = t.re.to_f64().round();
        t = &t - &Cx::from_f64(t.prec(), shift, 0.0);
        if t.abs_f64() < 1.0 - 1e-15 {
            t = -&t.inv();
        } else {
            break;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rings_partition_the_mesh() {
        let pts: Vec<(i64, i64)> = (0..4).flat_map(ring).collect();
        assert_eq!(pts.len(), 49);
        let mut s = pts.clone();
        s.sort();
        s.dedup();
        assert_eq!(s.len(), 49);
    }

    #[test]
    fn tau_reduction() {
        let t = reduce_tau(&Cx::from_f64(64, 3.2, 0.1));
        assert!(t.abs_f64() >= 1.0 - 1e-12 && t.re.to_f64().abs() <= 0.5 + 1e-12);
    }
}
