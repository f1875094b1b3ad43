//! Theta-null vectors and a numerical fixture built from truncated theta series.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::cyclo::CoeffField;
use super::group::DeltaType;
use crate::error::{Error, Result};

/// Projective coordinates Q_a, a ∈ K(δ), in the index order of [`DeltaType::element`].
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaNullVector<E> {
    pub delta: DeltaType,
    pub coords: Vec<E>,
}

impl<E: Clone> ThetaNullVector<E> {
    pub fn new<F: CoeffField<Elem = E>>(
        f: &F,
        delta: &DeltaType,
        coords: Vec<E>,
    ) -> Result<ThetaNullVector<E>> {
        if coords.len() != delta.order() {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                delta.order(),
                coords.len()
            )));
        }
        if coords.iter().all(|c| f.is_zero(c)) {
            return Err(Error::InvalidInput("theta-null vector is zero".into()));
        }
        Ok(ThetaNullVector {
            delta: delta.clone(),
            coords,
        })
    }

    pub fn get(&self, a: &[u64]) -> &E {
        &self.coords[self.delta.index(a)]
    }

    pub fn to_json<F: CoeffField<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "delta": self.delta.to_json(),
            "coords": self.coords.iter().map(|c| f.elem_to_json(c)).collect::<Vec<_>>(),
        })
    }
}

/// A complex theta-null vector with a bound on the discarded tail of each series.
#[derive(Clone, Debug)]
pub struct ThetaFixture {
    pub q: ThetaNullVector<Complex64>,
    pub tail_bound: f64,
}

const TERM_CUTOFF: f64 = 1e-40;

/// Σ_{m ≡ a mod d} exp(πiτm²/d + 2πimz) and a bound on the omitted terms.
///
/// The moduli of the terms are log-concave in m, so once past the peak the tail on each
/// side is dominated by a geometric series with the last observed ratio.
pub fn theta_series(d: u64, a: u64, tau: Complex64, z: Complex64) -> Result<(Complex64, f64)> {
    if tau.im <= 0.0 {
        return Err(Error::InvalidInput(
            "τ must lie in the upper half plane".into(),
        ));
    }
    let d = d as i64;
    let term = |k: i64| {
        let m = (d * k + a as i64) as f64;
        (Complex64::i() * std::f64::consts::PI * (tau * m * m / d as f64 + 2.0 * m * z)).exp()
    };
    // the modulus peaks near m = −d·Im z / Im τ, i.e. k = −Im z / Im τ
    let peak = (-z.im / tau.im).round() as i64;
    let mut sum = term(peak);
    let mut tail = 0.0;
    for dir in [1i64, -1] {
        let mut k = peak + dir;
        let mut prev = term(peak).norm();
        loop {
            let t = term(k);
            sum += t;
            let cur = t.norm();
            let past_peak = cur < prev;
            if past_peak && cur < TERM_CUTOFF * sum.norm().max(f64::MIN_POSITIVE) {
                let r = cur / prev;
                tail += cur * r / (1.0 - r);
                break;
            }
            if (k - peak).abs() > 1_000_000 {
                return Err(Error::InvalidInput(
                    "theta series does not converge fast enough".into(),
                ));
            }
            prev = cur;
            k += dir;
        }
    }
    Ok((sum, tail))
}

/// X_a(z) = Π θ_{dᵢ}(aᵢ; τᵢ, zᵢ) for all a ∈ K(δ), with the largest tail bound met.
pub fn theta_point(
    delta: &DeltaType,
    taus: &[Complex64],
    z: &[Complex64],
) -> Result<(Vec<Complex64>, f64)> {
    let g = delta.genus();
    if taus.len() != g || z.len() != g {
        return Err(Error::InvalidInput(format!(
            "need {g} periods and {g} coordinates"
        )));
    }
    let d = delta.divisors();
    let mut factors = Vec::with_capacity(g);
    let mut tail: f64 = 0.0;
    for i in 0..g {
        let col: Vec<(Complex64, f64)> = (0..d[i])
            .map(|a| theta_series(d[i], a, taus[i], z[i]))
            .collect::<Result<_>>()?;
        tail = tail.max(col.iter().map(|c| c.1).fold(0.0, f64::max));
        factors.push(col.into_iter().map(|c| c.0).collect::<Vec<_>>());
    }
    let coords = delta
        .elements()
        .iter()
        .map(|a| {
            a.iter()
                .enumerate()
                .map(|(i, &ai)| factors[i][ai as usize])
                .product()
        })
        .collect();
    Ok((coords, tail))
}

/// The theta-null vector of the product of the curves ℂ/(ℤ + τᵢℤ) at level δ.
pub fn theta_null_fixture(delta: &DeltaType, taus: &[Complex64]) -> Result<ThetaFixture> {
    let (coords, tail_bound) =
        theta_point(delta, taus, &vec![Complex64::new(0.0, 0.0); delta.genus()])?;
    let f = super::cyclo::ComplexField::new(delta.root_order(), 0.0);
    Ok(ThetaFixture {
        q: ThetaNullVector::new(&f, delta, coords)?,
        tail_bound,
    })
}
