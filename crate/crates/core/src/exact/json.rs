//! Canonical JSON forms: integers as decimal strings, rationals as `"p/q"`,
//! polynomials as coefficient arrays with the constant term first.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};

use super::matrix::Matrix;
use super::numfield::{NumberField, NumberFieldElem};
use super::poly::QPoly;
use super::rational::{fmt_rat, parse_rat, BigRat};
use super::residue::ResidueRing;

/// A matrix over one scalar kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactMatrix {
    Rational(Matrix<BigRat>),
    Residue {
        ring: ResidueRing,
        entries: Matrix<BigInt>,
    },
    NumberField {
        field: NumberField,
        entries: Matrix<NumberFieldElem>,
    },
}

impl ExactMatrix {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            ExactMatrix::Rational(m) => m.shape(),
            ExactMatrix::Residue { entries, .. } => entries.shape(),
            ExactMatrix::NumberField { entries, .. } => entries.shape(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ExactMatrix::Rational(m) => {
                json!({ "kind": "rational", "entries": rat_matrix_to_json(m) })
            }
            ExactMatrix::Residue { ring, entries } => json!({
                "kind": "residue",
                "ell": ring.ell,
                "n": ring.n,
                "entries": entries.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
            ExactMatrix::NumberField { field, entries } => json!({
                "kind": "number_field",
                "field": poly_to_json(field.modulus()),
                "entries": entries.to_rows().iter().map(|r| r.iter().map(|x| x.iter().map(fmt_rat).collect::<Vec<_>>()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = v.get("kind").and_then(Value::as_str).unwrap_or("rational");
        let entries = v.get("entries").ok_or_else(|| bad("missing entries"))?;
        match kind {
            "rational" => Ok(ExactMatrix::Rational(rat_matrix_from_json(entries)?)),
            "residue" => {
                let ell = v
                    .get("ell")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| bad("missing ell"))?;
                let n = v
                    .get("n")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| bad("missing n"))? as u32;
                let ring = ResidueRing::new(ell, n)?;
                let m = grid(entries, |x| int_from_json(x).map(|i| ring.elem(&i).value))?;
                Ok(ExactMatrix::Residue { ring, entries: m })
            }
            "number_field" => {
                let field = NumberField::new(poly_from_json(
                    v.get("field").ok_or_else(|| bad("missing field"))?,
                )?)?;
                let d = field.degree();
                let m = grid(entries, |x| {
                    let p = poly_from_json(x)?;
                    if p.deg() >= d && !p.is_zero() {
                        return Ok(field.from_poly(&p));
                    }
                    Ok((0..d).map(|i| p.coeff(i)).collect())
                })?;
                Ok(ExactMatrix::NumberField { field, entries: m })
            }
            other => Err(bad(&format!("unknown matrix kind {other:?}"))),
        }
    }
}

fn bad(msg: &str) -> Error {
    Error::InvalidInput(msg.to_string())
}

fn grid<T: Clone>(v: &Value, f: impl Fn(&Value) -> Result<T>) -> Result<Matrix<T>> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad("matrix must be an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    let mut cols = None;
    for r in rows {
        let r = r
            .as_array()
            .ok_or_else(|| bad("matrix row must be an array"))?;
        if *cols.get_or_insert(r.len()) != r.len() {
            return Err(bad("ragged matrix"));
        }
        out.push(r.iter().map(&f).collect::<Result<Vec<T>>>()?);
    }
    Ok(Matrix::from_rows(out, cols.unwrap_or(0)))
}

/// Accepts a JSON string (`"p"`, `"p/q"`, decimal) or a JSON number.
pub fn rat_from_json(v: &Value) -> Result<BigRat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(super::rational::rat(i))
            } else {
                parse_rat(&n.to_string())
            }
        }
        _ => Err(bad(&format!("expected a rational, got {v}"))),
    }
}

pub fn rat_to_json(r: &BigRat) -> Value {
    Value::String(fmt_rat(r))
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    let r = rat_from_json(v)?;
    if !r.is_integer() {
        return Err(bad(&format!("expected an integer, got {v}")));
    }
    Ok(r.to_integer())
}

pub fn int_to_json(i: &BigInt) -> Value {
    Value::String(i.to_string())
}

pub fn rat_matrix_from_json(v: &Value) -> Result<Matrix<BigRat>> {
    grid(v, rat_from_json)
}

pub fn rat_matrix_to_json(m: &Matrix<BigRat>) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(rat_to_json).collect()))
            .collect(),
    )
}

pub fn int_matrix_from_json(v: &Value) -> Result<Matrix<BigInt>> {
    grid(v, int_from_json)
}

pub fn int_matrix_to_json(m: &Matrix<BigInt>) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(int_to_json).collect()))
            .collect(),
    )
}

pub fn rat_vec_from_json(v: &Value) -> Result<Vec<BigRat>> {
    v.as_array()
        .ok_or_else(|| bad("expected an array"))?
        .iter()
        .map(rat_from_json)
        .collect()
}

pub fn rat_vec_to_json(v: &[BigRat]) -> Value {
    Value::Array(v.iter().map(rat_to_json).collect())
}

pub fn poly_from_json(v: &Value) -> Result<QPoly> {
    Ok(QPoly::new(rat_vec_from_json(v)?))
}

pub fn poly_to_json(p: &QPoly) -> Value {
    rat_vec_to_json(p.coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat_frac;

    #[test]
    fn roundtrips() {
        let m = Matrix::from_rows(vec![vec![rat_frac(1, 2), rat_frac(-3, 1)]], 2);
        let e = ExactMatrix::Rational(m);
        let j = e.to_json();
        assert_eq!(j["entries"][0][0], "1/2");
        assert_eq!(ExactMatrix::from_json(&j).unwrap(), e);

        let ring = ResidueRing::new(5, 2).unwrap();
        let e = ExactMatrix::Residue {
            ring,
            entries: Matrix::from_rows(vec![vec![BigInt::from(24)]], 1),
        };
        assert_eq!(ExactMatrix::from_json(&e.to_json()).unwrap(), e);

        let k = NumberField::new(QPoly::from_ints(&[1, 0, 1])).unwrap();
        let e = ExactMatrix::NumberField {
            field: k.clone(),
            entries: Matrix::from_rows(vec![vec![k.generator()]], 1),
        };
        assert_eq!(ExactMatrix::from_json(&e.to_json()).unwrap(), e);
        assert_eq!(
            poly_to_json(&QPoly::from_ints(&[-2, 0, 1])),
            serde_json::json!(["-2", "0", "1"])
        );
        assert_eq!(
            rat_from_json(&serde_json::json!(3)).unwrap(),
            crate::exact::rational::rat(3)
        );
    }
}
