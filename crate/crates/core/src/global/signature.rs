//! Inertia of symmetric and Hermitian forms over ℝ, ℂ and Hamilton's quaternions.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::field::Field;
use crate::exact::numfield::{NumberField, NumberFieldElem};
use crate::exact::rational::{rat, rat_from_f64, sign_of, BigRat};
use crate::exact::roots::{sign_at_root, RealRoot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    RealSymmetric,
    ComplexHermitian,
    QuaternionHermitian,
}

impl FormKind {
    /// Number of real coordinates of one scalar.
    pub fn width(self) -> usize {
        match self {
            FormKind::RealSymmetric => 1,
            FormKind::ComplexHermitian => 2,
            FormKind::QuaternionHermitian => 4,
        }
    }

    pub fn parse(s: &str) -> Result<FormKind> {
        match s {
            "real" | "real-symmetric" => Ok(FormKind::RealSymmetric),
            "complex" | "complex-hermitian" => Ok(FormKind::ComplexHermitian),
            "quaternion" | "quaternion-hermitian" => Ok(FormKind::QuaternionHermitian),
            _ => Err(Error::InvalidInput(format!("unknown form kind {s}"))),
        }
    }
}

/// (d₀, d₊, d₋): dimensions of the radical and of maximal positive and negative subspaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitSignature {
    pub kind: FormKind,
    pub d0: usize,
    pub d_plus: usize,
    pub d_minus: usize,
}

impl OrbitSignature {
    pub fn to_json(&self) -> Value {
        json!({ "kind": self.kind, "d0": self.d0, "d_plus": self.d_plus, "d_minus": self.d_minus })
    }
}

/// Arithmetic needed by the pivoting elimination: a ring with involution in which
/// self-adjoint elements have a sign.
trait Involutive {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn conj(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Sign of a nonzero self-adjoint element.
    fn sign(&mut self, a: &Self::Elem) -> i32;
}

/// ℝ, ℂ or ℍ with rational coordinates.
#[derive(Clone, Copy)]
struct Scalars(FormKind);

impl Involutive for Scalars {
    type Elem = Vec<BigRat>;

    fn zero(&self) -> Vec<BigRat> {
        vec![BigRat::zero(); self.0.width()]
    }
    fn add(&self, a: &Vec<BigRat>, b: &Vec<BigRat>) -> Vec<BigRat> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn sub(&self, a: &Vec<BigRat>, b: &Vec<BigRat>) -> Vec<BigRat> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }
    fn mul(&self, a: &Vec<BigRat>, b: &Vec<BigRat>) -> Vec<BigRat> {
        match self.0 {
            FormKind::RealSymmetric => vec![&a[0] * &b[0]],
            FormKind::ComplexHermitian => {
                vec![&a[0] * &b[0] - &a[1] * &b[1], &a[0] * &b[1] + &a[1] * &b[0]]
            }
            FormKind::QuaternionHermitian => {
                let (a1, b1, c1, d1) = (&a[0], &a[1], &a[2], &a[3]);
                let (a2, b2, c2, d2) = (&b[0], &b[1], &b[2], &b[3]);
                vec![
                    a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                    a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                    a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                    a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
                ]
            }
        }
    }
    fn conj(&self, a: &Vec<BigRat>) -> Vec<BigRat> {
        a.iter()
            .enumerate()
            .map(|(i, x)| if i == 0 { x.clone() } else { -x })
            .collect()
    }
    fn inv(&self, a: &Vec<BigRat>) -> Vec<BigRat> {
        let norm: BigRat = a.iter().map(|x| x * x).sum();
        self.conj(a).iter().map(|x| x / &norm).collect()
    }
    fn is_zero(&self, a: &Vec<BigRat>) -> bool {
        a.iter().all(|x| x.is_zero())
    }
    fn sign(&mut self, a: &Vec<BigRat>) -> i32 {
        sign_of(&a[0])
    }
}

/// A number field at a real embedding; the involution is trivial.
pub(crate) struct RealPlace<'a> {
    pub field: &'a NumberField,
    pub root: RealRoot,
}

impl Involutive for RealPlace<'_> {
    type Elem = NumberFieldElem;

    fn zero(&self) -> NumberFieldElem {
        Field::zero(self.field)
    }
    fn add(&self, a: &NumberFieldElem, b: &NumberFieldElem) -> NumberFieldElem {
        Field::add(self.field, a, b)
    }
    fn sub(&self, a: &NumberFieldElem, b: &NumberFieldElem) -> NumberFieldElem {
        Field::sub(self.field, a, b)
    }
    fn mul(&self, a: &NumberFieldElem, b: &NumberFieldElem) -> NumberFieldElem {
        Field::mul(self.field, a, b)
    }
    fn conj(&self, a: &NumberFieldElem) -> NumberFieldElem {
        a.clone()
    }
    fn inv(&self, a: &NumberFieldElem) -> NumberFieldElem {
        Field::inv(self.field, a).expect("pivot is nonzero")
    }
    fn is_zero(&self, a: &NumberFieldElem) -> bool {
        a.iter().all(|x| x.is_zero())
    }
    fn sign(&mut self, a: &NumberFieldElem) -> i32 {
        sign_at_root(&self.field.to_poly(a), &mut self.root)
    }
}

/// Symmetric Gaussian elimination with scalar pivots. Returns (d₀, d₊, d₋).
fn inertia<R: Involutive>(ring: &mut R, mut m: Vec<Vec<R::Elem>>) -> (usize, usize, usize) {
    let (mut pos, mut neg) = (0, 0);
    loop {
        let k = m.len();
        if k == 0 {
            return (0, pos, neg);
        }
        let pivot = match (0..k).find(|&i| !ring.is_zero(&m[i][i])) {
            Some(i) => i,
            None => {
                let Some((i, j)) = (0..k)
                    .flat_map(|i| (0..k).map(move |j| (i, j)))
                    .find(|&(i, j)| !ring.is_zero(&m[i][j]))
                else {
                    return (k, pos, neg);
                };
                // Replace e_i by e_i + e_j·u with u = conj(m_ij); the new diagonal entry is 2|m_ij|².
                let u = ring.conj(&m[i][j]);
                for row in m.iter_mut() {
                    let add = ring.mul(&row[j], &u);
                    row[i] = ring.add(&row[i], &add);
                }
                let uc = ring.conj(&u);
                let rj = m[j].clone();
                for (c, x) in m[i].iter_mut().zip(&rj) {
                    *c = ring.add(c, &ring.mul(&uc, x));
                }
                i
            }
        };
        let p = m[pivot][pivot].clone();
        match ring.sign(&p) {
            s if s > 0 => pos += 1,
            s if s < 0 => neg += 1,
            _ => unreachable!("pivot is nonzero"),
        }
        let pinv = ring.inv(&p);
        let rest: Vec<usize> = (0..k).filter(|&i| i != pivot).collect();
        m = rest
            .iter()
            .map(|&j| {
                let left = ring.mul(&m[j][pivot], &pinv);
                rest.iter()
                    .map(|&l| ring.sub(&m[j][l], &ring.mul(&left, &m[pivot][l])))
                    .collect()
            })
            .collect();
    }
}

/// Inertia of a symmetric matrix over a number field at a real embedding.
pub(crate) fn inertia_at_real_place(
    field: &NumberField,
    root: RealRoot,
    m: Vec<Vec<NumberFieldElem>>,
) -> (usize, usize, usize) {
    inertia(&mut RealPlace { field, root }, m)
}

/// A Hermitian form with exact entries; each entry holds `kind.width()` real coordinates
/// (quaternions as a + bi + cj + dk).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianForm {
    kind: FormKind,
    entries: Vec<Vec<Vec<BigRat>>>,
}

impl HermitianForm {
    pub fn new(kind: FormKind, entries: Vec<Vec<Vec<BigRat>>>) -> Result<HermitianForm> {
        let n = entries.len();
        let w = kind.width();
        if entries
            .iter()
            .any(|r| r.len() != n || r.iter().any(|x| x.len() != w))
        {
            return Err(Error::InvalidInput(format!(
                "form must be square with {w} coordinates per entry"
            )));
        }
        let s = Scalars(kind);
        for i in 0..n {
            for j in 0..n {
                if entries[i][j] != s.conj(&entries[j][i]) {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i},{j}) breaks the {kind:?} symmetry"
                    )));
                }
            }
        }
        Ok(HermitianForm { kind, entries })
    }

    pub fn real(m: &[Vec<BigRat>]) -> Result<HermitianForm> {
        HermitianForm::new(
            FormKind::RealSymmetric,
            m.iter()
                .map(|r| r.iter().map(|x| vec![x.clone()]).collect())
                .collect(),
        )
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<Vec<BigRat>>] {
        &self.entries
    }

    /// g*·M·g for a square matrix g of scalars of the same kind.
    pub fn congruent(&self, g: &[Vec<Vec<BigRat>>]) -> HermitianForm {
        let s = Scalars(self.kind);
        let n = self.size();
        let mg: Vec<Vec<Vec<BigRat>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(s.zero(), |acc, k| {
                            s.add(&acc, &s.mul(&self.entries[i][k], &g[k][j]))
                        })
                    })
                    .collect()
            })
            .collect();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(s.zero(), |acc, k| {
                            s.add(&acc, &s.mul(&s.conj(&g[k][i]), &mg[k][j]))
                        })
                    })
                    .collect()
            })
            .collect();
        HermitianForm {
            kind: self.kind,
            entries,
        }
    }

    pub fn from_json(v: &Value) -> Result<HermitianForm> {
        let kind = FormKind::parse(v["kind"].as_str().unwrap_or("real"))?;
        let rows = v["matrix"]
            .as_array()
            .ok_or_else(|| Error::InvalidInput("missing matrix".into()))?;
        let mut entries = Vec::new();
        for r in rows {
            let mut row = Vec::new();
            for x in r
                .as_array()
                .ok_or_else(|| Error::InvalidInput("matrix rows must be arrays".into()))?
            {
                let coords = match x.as_array() {
                    Some(a) => a
                        .iter()
                        .map(crate::exact::json::rat_from_json)
                        .collect::<Result<Vec<_>>>()?,
                    None => vec![crate::exact::json::rat_from_json(x)?],
                };
                let mut c = coords;
                c.resize(kind.width(), BigRat::zero());
                row.push(c);
            }
            entries.push(row);
        }
        HermitianForm::new(kind, entries)
    }
}

/// Exact inertia by pivoted Gram–Schmidt.
pub fn signature_classify(form: &HermitianForm) -> OrbitSignature {
    let (d0, d_plus, d_minus) = inertia(&mut Scalars(form.kind), form.entries.clone());
    OrbitSignature {
        kind: form.kind,
        d0,
        d_plus,
        d_minus,
    }
}

/// A Hermitian form known only up to `radius`: every entry of the true form differs from
/// the stored one by a scalar of absolute value at most `radius`.
#[derive(Clone, Debug)]
pub struct ApproxForm {
    pub kind: FormKind,
    pub entries: Vec<Vec<Vec<f64>>>,
    pub radius: f64,
}

/// Inertia of an approximate form. The stored centre C is converted exactly; the answer is
/// certified when C − tI and C + tI have the same inertia with t = n·radius, since then no
/// eigenvalue of any admissible form lies in [−t, t]. A form that may be singular cannot be
/// certified unless `radius` is zero.
pub fn signature_classify_approx(form: &ApproxForm) -> Result<OrbitSignature> {
    let exact: Vec<Vec<Vec<BigRat>>> = form
        .entries
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.iter().map(|&c| rat_from_f64(c)).collect())
                .collect()
        })
        .collect();
    let centre = HermitianForm::new(form.kind, exact)?;
    if form.radius == 0.0 {
        return Ok(signature_classify(&centre));
    }
    let n = centre.size();
    let t = rat_from_f64(form.radius) * rat(n as i64);
    let shifted = |sign: i64| {
        let mut e = centre.entries.clone();
        for (i, row) in e.iter_mut().enumerate() {
            row[i][0] += &t * rat(sign);
        }
        signature_classify(&HermitianForm {
            kind: form.kind,
            entries: e,
        })
    };
    let (lo, hi) = (shifted(-1), shifted(1));
    if lo == hi && lo.d0 == 0 && t.is_positive() {
        Ok(lo)
    } else {
        Err(Error::SignUncertain)
    }
}
