//! Plane Weierstrass models y² = a₃x³ + a₂x² + a₁x + a₀ over ℚ with origin [0:1:0].

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::json::{rat_from_json, rat_to_json};
use crate::exact::rational::{rat, BigRat};

#[derive(Clone, Debug, PartialEq)]
pub struct CurveModel {
    /// Coefficients a₀..a₃ of the cubic.
    coeffs: [BigRat; 4],
}

/// The normalized invariant differential dx/y, with the factor relating it to dX/Y on
/// the associated ℘-model.
#[derive(Clone, Debug, PartialEq)]
pub struct Differential {
    pub description: String,
    /// γ² with dx/y = γ⁻¹·dX/Y.
    pub gamma_sq: BigRat,
}

impl CurveModel {
    /// y² = a₃x³ + a₂x² + a₁x + a₀ from `[a0, a1, a2, a3]`.
    pub fn new(coeffs: [BigRat; 4]) -> Result<Self> {
        let c = CurveModel { coeffs };
        if c.coeffs[3].is_zero() {
            return Err(Error::NotSmoothAtOrigin("cubic has degree below 3".into()));
        }
        if c.discriminant().is_zero() {
            return Err(Error::NotSmoothAtOrigin("cubic has a repeated root".into()));
        }
        Ok(c)
    }

    pub fn from_ints(c: [i64; 4]) -> Result<Self> {
        Self::new(c.map(rat))
    }

    pub fn coeffs(&self) -> &[BigRat; 4] {
        &self.coeffs
    }

    pub fn genus(&self) -> usize {
        1
    }

    /// Discriminant of the cubic a₃x³ + a₂x² + a₁x + a₀.
    pub fn discriminant(&self) -> BigRat {
        let [d, c, b, a] = &self.coeffs;
        rat(18) * a * b * c * d - rat(4) * b * b * b * d + b * b * c * c
            - rat(4) * a * c * c * c
            - rat(27) * a * a * d * d
    }

    /// The model y² = a₃x³ + a₂λ⁻²x² + a₁λ⁻⁴x + a₀λ⁻⁶, mapped to `self` by (x, y) ↦ (λ²x, λ³y).
    pub fn scaled(&self, lambda: &BigRat) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::InvalidInput("scaling factor must be nonzero".into()));
        }
        let l2 = BigRat::one() / (lambda * lambda);
        let [a0, a1, a2, a3] = &self.coeffs;
        Self::new([a0 * &l2 * &l2 * &l2, a1 * &l2 * &l2, a2 * &l2, a3.clone()])
    }

    /// β = −a₂/(3a₃): the shift x = X + β removing the quadratic term.
    pub fn shift(&self) -> BigRat {
        -&self.coeffs[2] / (rat(3) * &self.coeffs[3])
    }

    /// (g₂, g₃) of Y² = 4X³ − g₂X − g₃ with x = X + β, y = γY, γ² = a₃/4.
    pub fn weierstrass_invariants(&self) -> (BigRat, BigRat) {
        let [a0, a1, a2, a3] = &self.coeffs;
        let b = self.shift();
        // a₃(X+β)³ + a₂(X+β)² + a₁(X+β) + a₀ = a₃X³ + pX + q
        let p = rat(3) * a3 * &b * &b + rat(2) * a2 * &b + a1;
        let q = a3 * &b * &b * &b + a2 * &b * &b + a1 * &b + a0;
        (-rat(4) * &p / a3, -rat(4) * &q / a3)
    }

    pub fn eval_cubic(&self, x: &BigRat) -> BigRat {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRat::zero(), |acc, c| acc * x + c)
    }

    /// Whether the affine point (x, y) lies on the curve.
    pub fn contains(&self, x: &BigRat, y: &BigRat) -> bool {
        y * y == self.eval_cubic(x)
    }

    /// Curve JSON: `{field, polynomials, origin, genus}`; each polynomial is a list of terms
    /// `[coeff, i, j]` meaning coeff·xⁱyʲ, and the polynomial is set to zero.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidInput(m.to_string());
        let field = v.get("field").and_then(Value::as_str).unwrap_or("Q");
        if field != "Q" {
            return Err(Error::Unsupported(format!(
                "curves over {field}; only Q is supported"
            )));
        }
        if let Some(g) = v.get("genus") {
            if g.as_u64() != Some(1) {
                return Err(Error::Unsupported(
                    "only genus 1 models are supported".into(),
                ));
            }
        }
        if let Some(o) = v.get("origin") {
            let o: Vec<BigRat> = o
                .as_array()
                .ok_or_else(|| bad("origin must be an array"))?
                .iter()
                .map(rat_from_json)
                .collect::<Result<_>>()?;
            if o.len() != 3 || !o[0].is_zero() || o[1].is_zero() || !o[2].is_zero() {
                return Err(Error::Unsupported(
                    "origin must be the point [0,1,0]".into(),
                ));
            }
        }
        let polys = v
            .get("polynomials")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing polynomials"))?;
        if polys.len() != 1 {
            return Err(Error::Unsupported(
                "plane models need exactly one defining polynomial".into(),
            ));
        }
        let mut cubic = [
            BigRat::zero(),
            BigRat::zero(),
            BigRat::zero(),
            BigRat::zero(),
        ];
        let mut ysq = BigRat::zero();
        for t in polys[0]
            .as_array()
            .ok_or_else(|| bad("polynomial must be a list of terms"))?
        {
            let t = t
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| bad("term must be [coeff, i, j]"))?;
            let c = rat_from_json(&t[0])?;
            let i = t[1]
                .as_u64()
                .ok_or_else(|| bad("exponent must be a nonnegative integer"))?;
            let j = t[2]
                .as_u64()
                .ok_or_else(|| bad("exponent must be a nonnegative integer"))?;
            match (i, j) {
                (0, 2) => ysq += c,
                (i, 0) if i <= 3 => cubic[i as usize] -= c,
                _ => {
                    return Err(Error::Unsupported(format!(
                        "term x^{i} y^{j}; expected y^2 = cubic(x)"
                    )))
                }
            }
        }
        if ysq.is_zero() {
            return Err(Error::NotSmoothAtOrigin("no y^2 term".into()));
        }
        Self::new(cubic.map(|c| c / &ysq))
    }

    pub fn to_json(&self) -> Value {
        let mut terms = vec![json!(["1", 0, 2])];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.push(json!([rat_to_json(&-c), i, 0]));
            }
        }
        json!({"field": "Q", "polynomials": [terms], "origin": ["0", "1", "0"], "genus": 1})
    }
}

/// A basis of translation-invariant differentials; for these models the single form dx/y.
pub fn invariant_differentials(c: &CurveModel) -> Vec<Differential> {
    vec![Differential {
        description: "dx/y".into(),
        gamma_sq: &c.coeffs[3] / rat(4),
    }]
}

impl Differential {
    /// Factor μ with φ*(dx/y) = μ·dx'/y' for φ(x', y') = (λ²x', λ³y').
    pub fn pullback_under_scaling(lambda: &BigRat) -> BigRat {
        BigRat::one() / lambda
    }
}
