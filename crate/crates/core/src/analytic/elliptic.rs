//! Uniformization of a Weierstrass model: exp through the ℘ Laurent series and repeated
//! doubling, and its inverse on a chart around the origin by a contraction iteration.
//!
//! Internally points are kept on the short model y'² = x'³ + ax' + b with x' = ℘(w),
//! y' = ℘'(w)/2, where w = γz and γ² = a₃/4. The chart coordinate is t = −x'/y' = w + O(w⁵).

use rug::Float;

use super::complex::{float_from_rat, Cx};
use super::curve::CurveModel;
use crate::error::{Error, Result};

/// Contraction constant certified on the chart ball.
pub const CONTRACTION: f64 = 0.45;
/// Extra working bits on top of the requested precision.
pub const GUARD_BITS: u32 = 48;
/// Largest working precision any retry may ask for.
pub const MAX_BITS: u32 = 1 << 15;

/// A point (x : y : z) of the projective closure of the curve model.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    pub x: Cx,
    pub y: Cx,
    pub z: Cx,
}

impl ProjPoint {
    pub fn origin(prec: u32) -> Self {
        ProjPoint {
            x: Cx::zero(prec),
            y: Cx::one(prec),
            z: Cx::zero(prec),
        }
    }

    pub fn affine(x: Cx, y: Cx) -> Self {
        let z = Cx::one(x.prec());
        ProjPoint { x, y, z }
    }

    fn coords(&self) -> [&Cx; 3] {
        [&self.x, &self.y, &self.z]
    }

    fn max_abs(&self) -> f64 {
        self.coords()
            .iter()
            .map(|c| c.abs_f64())
            .fold(0.0, f64::max)
    }

    /// Rescaled so that the largest coordinate has absolute value 1.
    pub fn normalized(&self) -> Self {
        let [x, y, z] = self.coords();
        let big = [x, y, z]
            .into_iter()
            .max_by(|a, b| a.abs_f64().total_cmp(&b.abs_f64()))
            .unwrap();
        if big.is_zero() {
            return self.clone();
        }
        let s = big.inv();
        ProjPoint {
            x: x * &s,
            y: y * &s,
            z: z * &s,
        }
    }

    /// (x/z, y/z), or `None` at infinity.
    pub fn to_affine(&self) -> Option<(Cx, Cx)> {
        if self.z.abs_f64() <= 1e-300 * self.max_abs() {
            return None;
        }
        let s = self.z.inv();
        Some((&self.x * &s, &self.y * &s))
    }

    /// Scale-invariant distance max |pᵢqⱼ − pⱼqᵢ| / (|p|·|q|).
    pub fn distance(&self, o: &ProjPoint) -> f64 {
        let (p, q) = (self.normalized(), o.normalized());
        let (p, q) = (p.coords(), q.coords());
        let mut d: f64 = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                d = d.max((&(p[i] * q[j]) - &(p[j] * q[i])).abs_f64());
            }
        }
        d
    }

    pub fn is_origin(&self, tol: f64) -> bool {
        self.distance(&ProjPoint::origin(self.x.prec())) <= tol
    }

    pub fn to_f64(&self) -> [(f64, f64); 3] {
        [self.x.to_f64(), self.y.to_f64(), self.z.to_f64()]
    }
}

type Triple = [Cx; 3];

fn normalize(p: Triple) -> Triple {
    let q = ProjPoint {
        x: p[0].clone(),
        y: p[1].clone(),
        z: p[2].clone(),
    }
    .normalized();
    [q.x, q.y, q.z]
}

/// Group law on y² = x³ + ax + b in projective coordinates.
#[derive(Clone, Debug)]
struct ShortModel {
    a: Cx,
    /// Relative size below which a coordinate counts as zero.
    tol: f64,
}

impl ShortModel {
    fn origin(&self) -> Triple {
        let p = self.a.prec();
        [Cx::zero(p), Cx::one(p), Cx::zero(p)]
    }

    fn is_origin(&self, p: &Triple) -> bool {
        let y = p[1].abs_f64();
        p[0].abs_f64() <= self.tol * y && p[2].abs_f64() <= self.tol * y
    }

    fn neg(&self, p: &Triple) -> Triple {
        [p[0].clone(), -&p[1], p[2].clone()]
    }

    fn double(&self, p: &Triple) -> Triple {
        if self.is_origin(p) {
            return self.origin();
        }
        let [x, y, z] = p;
        let w = &(&self.a * &z.sqr()) + &x.sqr().scale_f64(3.0);
        let s = y * z;
        let b = &(x * y) * &s;
        let h = &w.sqr() - &b.scale_f64(8.0);
        let x3 = (&h * &s).scale_f64(2.0);
        let y3 = &(&w * &(&b.scale_f64(4.0) - &h)) - &(&y.sqr() * &s.sqr()).scale_f64(8.0);
        let z3 = s.powu(3).scale_f64(8.0);
        normalize([x3, y3, z3])
    }

    fn add(&self, p: &Triple, q: &Triple) -> Triple {
        if self.is_origin(p) {
            return q.clone();
        }
        if self.is_origin(q) {
            return p.clone();
        }
        let [x1, y1, z1] = p;
        let [x2, y2, z2] = q;
        let u1 = y2 * z1;
        let u2 = y1 * z2;
        let v1 = x2 * z1;
        let v2 = x1 * z2;
        let u = &u1 - &u2;
        let v = &v1 - &v2;
        let scale = v1
            .abs_f64()
            .max(v2.abs_f64())
            .max(u1.abs_f64())
            .max(u2.abs_f64());
        if v.abs_f64() <= self.tol * scale {
            return if u.abs_f64() <= self.tol * scale {
                self.double(p)
            } else {
                self.origin()
            };
        }
        let w = z1 * z2;
        let v_2 = v.sqr();
        let v_3 = &v_2 * &v;
        let a = &(&(&u.sqr() * &w) - &v_3) - &(&v_2 * &v2).scale_f64(2.0);
        let x3 = &v * &a;
        let y3 = &(&u * &(&(&v_2 * &v2) - &a)) - &(&v_3 * &u2);
        let z3 = &v_3 * &w;
        normalize([x3, y3, z3])
    }

    fn mul(&self, n: i64, p: &Triple) -> Triple {
        let mut acc = self.origin();
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.double(&base);
            }
        }
        acc
    }
}

/// An analytic map ℂⁿ → ℂⁿ with its Jacobian.
pub trait AnalyticMap {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[Cx]) -> Vec<Cx>;
    fn jacobian(&self, x: &[Cx]) -> Vec<Vec<Cx>>;
}

/// A one-variable complex polynomial, lowest coefficient first.
#[derive(Clone, Debug)]
pub struct PolynomialMap {
    pub coeffs: Vec<Cx>,
}

impl PolynomialMap {
    pub fn from_f64(prec: u32, coeffs: &[f64]) -> Self {
        PolynomialMap {
            coeffs: coeffs.iter().map(|&c| Cx::from_f64(prec, c, 0.0)).collect(),
        }
    }

    fn horner(c: &[Cx], x: &Cx) -> Cx {
        c.iter()
            .rev()
            .fold(Cx::zero(x.prec()), |acc, a| &(&acc * x) + a)
    }
}

impl AnalyticMap for PolynomialMap {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, x: &[Cx]) -> Vec<Cx> {
        vec![Self::horner(&self.coeffs, &x[0])]
    }

    fn jacobian(&self, x: &[Cx]) -> Vec<Vec<Cx>> {
        let d: Vec<Cx> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale_f64(i as f64))
            .collect();
        vec![vec![Self::horner(&d, &x[0])]]
    }
}

fn vec_norm(v: &[Cx]) -> f64 {
    v.iter().map(|c| c.abs_f64().powi(2)).sum::<f64>().sqrt()
}

fn mat_vec_cx(m: &[Vec<Cx>], v: &[Cx]) -> Vec<Cx> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Cx::zero(v[0].prec()), |acc, (a, b)| &acc + &(a * b))
        })
        .collect()
}

/// Inverse of a square complex matrix by Gauss–Jordan elimination with partial pivoting.
fn inverse_cx(m: &[Vec<Cx>]) -> Option<Vec<Vec<Cx>>> {
    let n = m.len();
    let p = m[0][0].prec();
    let mut a: Vec<Vec<Cx>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Cx::one(p) } else { Cx::zero(p) }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs_f64().total_cmp(&a[j][col].abs_f64()))?;
        if a[piv][col].is_zero() {
            return None;
        }
        a.swap(col, piv);
        let inv = a[col][col].inv();
        a[col] = a[col].iter().map(|x| x * &inv).collect();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Result of [`local_invert`].
#[derive(Clone, Debug)]
pub struct Inversion {
    pub x: Vec<Cx>,
    pub iterations: usize,
}

/// Solves f(x) = y for x ∈ B_ε(e) by iterating x ↦ x + df_e⁻¹(y − f(x)).
///
/// Requires ‖df_e⁻¹(df_x − df_e)‖ ≤ c on the ball, which is checked at every iterate, and
/// ‖df_e⁻¹(y − f(e))‖ ≤ (1−c)ε. Stops once a step is below 2^−bits relative to |x|.
pub fn local_invert(
    f: &dyn AnalyticMap,
    e: &[Cx],
    y: &[Cx],
    eps: f64,
    c: f64,
    bits: u32,
) -> Result<Inversion> {
    let n = f.dim();
    if e.len() != n || y.len() != n || !(0.0..1.0).contains(&c) || eps <= 0.0 {
        return Err(Error::InvalidInput(
            "local_invert needs matching dimensions, ε > 0 and 0 ≤ c < 1".into(),
        ));
    }
    let je = f.jacobian(e);
    let a = inverse_cx(&je).ok_or_else(|| Error::ContractionViolated("df_e is singular".into()))?;
    let fe = f.eval(e);
    let d0: Vec<Cx> = y.iter().zip(&fe).map(|(u, v)| u - v).collect();
    if vec_norm(&mat_vec_cx(&a, &d0)) > (1.0 - c) * eps * (1.0 + 1e-12) {
        return Err(Error::OutOfDomain);
    }
    let max_iter = (bits as f64 / (1.0 / c.max(1e-3)).log2()).ceil() as usize + 16;
    let tol = 2f64.powi(-(bits.min(1000) as i32));
    let mut x = e.to_vec();
    for it in 1..=max_iter {
        let fx = f.eval(&x);
        let r: Vec<Cx> = y.iter().zip(&fx).map(|(u, v)| u - v).collect();
        let step = mat_vec_cx(&a, &r);
        x = x.iter().zip(&step).map(|(u, v)| u + v).collect();
        let off: Vec<Cx> = x.iter().zip(e).map(|(u, v)| u - v).collect();
        if vec_norm(&off) > eps {
            return Err(Error::ContractionViolated(format!(
                "iterate left the ball after {it} steps"
            )));
        }
        let jx = f.jacobian(&x);
        let diff: Vec<Vec<Cx>> = jx
            .iter()
            .zip(&je)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(u, v)| u - v).collect())
            .collect();
        let frob: f64 = (0..n)
            .map(|j| {
                vec_norm(&mat_vec_cx(
                    &a,
                    &diff.iter().map(|r| r[j].clone()).collect::<Vec<_>>(),
                ))
                .powi(2)
            })
            .sum::<f64>()
            .sqrt();
        if frob > c {
            return Err(Error::ContractionViolated(format!(
                "‖df_e⁻¹(df_x − df_e)‖ ≈ {frob:.3} exceeds {c}"
            )));
        }
        if vec_norm(&step) <= tol * vec_norm(&x).max(1.0) {
            return Ok(Inversion { x, iterations: it });
        }
    }
    Err(Error::ContractionViolated(format!(
        "no convergence in {max_iter} steps"
    )))
}

/// Chart around the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartData {
    /// Indices of the affine coordinates (in the chart y = 1 of ℙ²) used as local parameters.
    pub coords: Vec<usize>,
    /// Radius of the ball in ℂ on which the chart map is inverted.
    pub eps: f64,
    /// Radius of the image ball in the chart coordinate.
    pub eps1: f64,
    pub contraction: f64,
}

/// Output of [`exp_ball`]: exp is computed directly and injectively on |z| < `radius`,
/// and lands in the set of points with chart coordinate below `image_radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpBall {
    pub radius: f64,
    pub image_radius: f64,
    pub chart: ChartData,
}

/// Precomputed series and chart data for one curve at one working precision.
#[derive(Clone, Debug)]
pub struct Uniformizer {
    curve: CurveModel,
    prec: u32,
    wp: u32,
    beta: Float,
    gamma: Cx,
    gamma_inv: Cx,
    short: ShortModel,
    /// ℘ Laurent coefficients c_k, ℘(w) = w⁻² + Σ c_k w^{2k−2}; entries 0 and 1 are zero.
    c: Vec<Float>,
    /// Coefficients of t(exp w) = Σ F_k w^{2k+1}.
    chart_series: Vec<Float>,
    /// Series are used for |w|² ≤ u_radius.
    u_radius: f64,
    /// Chart radii in w-coordinates.
    eps_w: f64,
    eps1_w: f64,
}

fn max_root(coeffs: &[Float]) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (c.clone().abs().ln().to_f64() / k as f64).exp())
        .fold(0.0, f64::max)
}

impl Uniformizer {
    pub fn new(curve: &CurveModel, prec: u32) -> Result<Self> {
        Self::with_working_precision(curve, prec, prec + GUARD_BITS)
    }

    pub fn with_working_precision(curve: &CurveModel, prec: u32, wp: u32) -> Result<Self> {
        if prec < 16 || wp > MAX_BITS || wp < prec {
            return Err(Error::InvalidInput(format!(
                "unsupported precision {prec} (working {wp})"
            )));
        }
        let (g2, g3) = curve.weierstrass_invariants();
        let g2 = float_from_rat(wp, &g2);
        let g3 = float_from_rat(wp, &g3);
        let beta = float_from_rat(wp, &curve.shift());
        let gamma = Cx::real(float_from_rat(
            wp,
            &(&curve.coeffs()[3] / crate::exact::rational::rat(4)),
        ))
        .sqrt();
        let gamma_inv = gamma.inv();
        let short = ShortModel {
            a: Cx::real(Float::with_val(wp, &g2 / -4i32)),
            tol: 2f64.powi(-(wp as i32) / 2),
        };
        let terms = (wp / 2 + 16) as usize;
        let mut c = vec![Float::new(wp); terms + 1];
        c[2] = Float::with_val(wp, &g2 / 20u32);
        if terms >= 3 {
            c[3] = Float::with_val(wp, &g3 / 28u32);
        }
        for k in 4..=terms {
            let mut s = Float::new(wp);
            for m in 2..=k - 2 {
                s += Float::with_val(wp, &c[m] * &c[k - m]);
            }
            c[k] = s * 3u32 / ((2 * k as u32 + 1) * (k as u32 - 3));
        }
        let r = max_root(&c);
        let u_radius = if r > 0.0 { 1.0 / (8.0 * r) } else { 1.0 };
        // F = P/Q with P = 1 + Σ c_k u^k and Q = 1 − Σ (k−1) c_k u^k.
        let mut f = vec![Float::new(wp); terms + 1];
        f[0] = Float::with_val(wp, 1);
        for k in 1..=terms {
            let mut s = c[k].clone();
            for j in 2..=k {
                s += Float::with_val(wp, &c[j] * &f[k - j]) * (j as u32 - 1);
            }
            f[k] = s;
        }
        let rf = max_root(&f);
        let eps_max = u_radius
            .sqrt()
            .min(if rf > 0.0 { (0.25 / rf).sqrt() } else { 1.0 });
        let fa: Vec<f64> = f.iter().map(|x| x.to_f64().abs()).collect();
        let slope = |e: f64| {
            (2..fa.len())
                .map(|k| (2 * k + 1) as f64 * fa[k] * e.powi(2 * k as i32))
                .sum::<f64>()
        };
        let eps_w = if slope(eps_max) <= CONTRACTION {
            eps_max
        } else {
            let (mut lo, mut hi) = (0.0, eps_max);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if slope(mid) <= CONTRACTION {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        let eps1_w = (1.0 - CONTRACTION) * eps_w;
        Ok(Uniformizer {
            curve: curve.clone(),
            prec,
            wp,
            beta,
            gamma,
            gamma_inv,
            short,
            c,
            chart_series: f,
            u_radius,
            eps_w,
            eps1_w,
        })
    }

    pub fn curve(&self) -> &CurveModel {
        &self.curve
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn working_precision(&self) -> u32 {
        self.wp
    }

    /// γ with dx/y = γ⁻¹·d℘/℘'.
    pub fn gamma(&self) -> &Cx {
        &self.gamma
    }

    fn gamma_abs(&self) -> f64 {
        self.gamma.abs_f64()
    }

    pub fn ball(&self) -> ExpBall {
        let g = self.gamma_abs();
        let eps = self.eps_w / g;
        let eps1 = self.eps1_w / g;
        ExpBall {
            radius: eps1 / (1.0 + CONTRACTION),
            image_radius: eps1,
            chart: ChartData {
                coords: vec![0],
                eps,
                eps1,
                contraction: CONTRACTION,
            },
        }
    }

    /// Relative tolerance used when comparing points computed at the working precision.
    pub fn tolerance(&self) -> f64 {
        2f64.powi(-((self.wp / 2) as i32))
    }

    fn series(&self, w: &Cx) -> Triple {
        let u = w.sqr();
        let n = self.c.len() - 1;
        let mut p = Cx::zero(self.wp);
        let mut q = Cx::zero(self.wp);
        for k in (2..=n).rev() {
            p = &(&p * &u) + &Cx::real(self.c[k].clone());
            q = &(&q * &u) + &Cx::real(Float::with_val(self.wp, &self.c[k] * (k as u32 - 1)));
        }
        let u2 = u.sqr();
        let one = Cx::one(self.wp);
        let pp = &one + &(&p * &u2);
        let qq = &one - &(&q * &u2);
        [w * &pp, -&qq, &u * w]
    }

    fn exp_w(&self, w: &Cx) -> Result<Triple> {
        let w = w.with_prec(self.wp);
        let n2 = w.norm_sqr().to_f64();
        if !n2.is_finite() {
            return Err(Error::InvalidInput("non-finite argument".into()));
        }
        if n2 <= self.u_radius {
            return Ok(normalize(self.series(&w)));
        }
        let k = (0.5 * (n2 / self.u_radius).log2()).ceil().max(1.0) as u32;
        if 2 * k + 16 > self.wp - self.prec {
            return Err(Error::PrecisionFailure {
                required_bits: self.prec + 2 * k + 16,
            });
        }
        let mut pt = normalize(self.series(&w.scale_f64(2f64.powi(-(k as i32)))));
        for _ in 0..k {
            pt = self.short.double(&pt);
        }
        Ok(pt)
    }

    fn to_short(&self, p: &ProjPoint) -> Triple {
        let p = p.normalized();
        let p = ProjPoint {
            x: p.x.with_prec(self.wp),
            y: p.y.with_prec(self.wp),
            z: p.z.with_prec(self.wp),
        };
        let x = &p.x - &p.z.scale(&self.beta);
        let y = (&p.y * &self.gamma_inv).scale_f64(0.5);
        [x, y, p.z]
    }

    fn from_short(&self, t: &Triple) -> ProjPoint {
        let x = &t[0] + &t[2].scale(&self.beta);
        let y = (&t[1] * &self.gamma).scale_f64(2.0);
        ProjPoint {
            x,
            y,
            z: t[2].clone(),
        }
        .normalized()
    }

    /// exp(z) for the invariant differential dx/y.
    pub fn exp(&self, z: &Cx) -> Result<ProjPoint> {
        Ok(self.from_short(&self.exp_w(&(&z.with_prec(self.wp) * &self.gamma))?))
    }

    /// The chart coordinate γ⁻¹·(−x'/y') of a point, when y' ≠ 0.
    pub fn chart_coordinate(&self, p: &ProjPoint) -> Option<Cx> {
        let s = self.to_short(p);
        if s[1].is_zero() {
            return None;
        }
        Some(&(-&s[0]).div(&s[1]) * &self.gamma_inv)
    }

    /// Inverse of exp on the chart: the unique z with |γz| < ε and exp(z) = p.
    pub fn log(&self, p: &ProjPoint) -> Result<Cx> {
        let s = self.to_short(p);
        if s[1].is_zero() {
            return Err(Error::OutOfChart);
        }
        let t = (-&s[0]).div(&s[1]);
        if t.abs_f64() > self.eps1_w {
            return Err(Error::OutOfChart);
        }
        let map = ChartMap { u: self };
        let zero = [Cx::zero(self.wp)];
        let inv = match local_invert(&map, &zero, &[t], self.eps_w, CONTRACTION, self.wp - 8) {
            Ok(inv) => inv,
            Err(Error::OutOfDomain) => return Err(Error::OutOfChart),
            Err(e) => return Err(e),
        };
        let w = inv.x.into_iter().next().unwrap();
        let back = normalize(self.series(&w));
        let dist = ProjPoint {
            x: back[0].clone(),
            y: back[1].clone(),
            z: back[2].clone(),
        }
        .distance(&ProjPoint {
            x: s[0].clone(),
            y: s[1].clone(),
            z: s[2].clone(),
        });
        if dist > self.tolerance() {
            return Err(Error::OutOfChart);
        }
        Ok(&w * &self.gamma_inv)
    }

    pub fn add(&self, p: &ProjPoint, q: &ProjPoint) -> ProjPoint {
        self.from_short(&self.short.add(&self.to_short(p), &self.to_short(q)))
    }

    pub fn neg(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint {
            x: p.x.clone(),
            y: -&p.y,
            z: p.z.clone(),
        }
    }

    pub fn mul(&self, n: i64, p: &ProjPoint) -> ProjPoint {
        self.from_short(&self.short.mul(n, &self.to_short(p)))
    }

    /// Residual |y²z − (a₃x³ + a₂x²z + a₁xz² + a₀z³)| of a normalized point.
    pub fn residual(&self, p: &ProjPoint) -> f64 {
        let p = p.normalized();
        let co: Vec<Cx> = self
            .curve
            .coeffs()
            .iter()
            .map(|c| Cx::real(float_from_rat(self.wp, c)))
            .collect();
        let (x, y, z) = (
            p.x.with_prec(self.wp),
            p.y.with_prec(self.wp),
            p.z.with_prec(self.wp),
        );
        let lhs = &y.sqr() * &z;
        let mut rhs = Cx::zero(self.wp);
        for (i, c) in co.iter().enumerate() {
            rhs = &rhs + &(&(c * &x.powu(i as u32)) * &z.powu(3 - i as u32));
        }
        (&lhs - &rhs).abs_f64()
    }
}

/// The map w ↦ t(exp w) in ℘-coordinates, defined on the chart ball.
struct ChartMap<'a> {
    u: &'a Uniformizer,
}

impl AnalyticMap for ChartMap<'_> {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, x: &[Cx]) -> Vec<Cx> {
        let s = self.u.series(&x[0]);
        // t = −X/Y with (X : Y : Z) = (wP : −Q : w³).
        vec![(-&s[0]).div(&s[1])]
    }

    fn jacobian(&self, x: &[Cx]) -> Vec<Vec<Cx>> {
        let u = x[0].sqr();
        let f = &self.u.chart_series;
        let mut acc = Cx::zero(self.u.wp);
        for k in (0..f.len()).rev() {
            acc = &(&acc * &u) + &Cx::real(Float::with_val(self.u.wp, &f[k] * (2 * k as u32 + 1)));
        }
        vec![vec![acc]]
    }
}

/// Chart radii for the curve at the given precision.
pub fn exp_ball(c: &CurveModel, prec: u32) -> Result<ExpBall> {
    Ok(Uniformizer::new(c, prec)?.ball())
}

/// exp(z), retrying at a higher working precision when the doubling chain is long.
pub fn exp_point(c: &CurveModel, z: &Cx, prec: u32) -> Result<ProjPoint> {
    let u = Uniformizer::new(c, prec)?;
    match u.exp(z) {
        Err(Error::PrecisionFailure { required_bits })
            if required_bits + GUARD_BITS <= MAX_BITS =>
        {
            Uniformizer::with_working_precision(c, prec, required_bits + GUARD_BITS)?.exp(z)
        }
        r => r,
    }
}

/// exp⁻¹(p) for p in the chart neighbourhood of the origin.
pub fn log_point(c: &CurveModel, p: &ProjPoint, prec: u32) -> Result<Cx> {
    Uniformizer::new(c, prec)?.log(p)
}
