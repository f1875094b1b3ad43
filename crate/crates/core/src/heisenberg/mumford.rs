//! Checking the conditions characterizing a Mumford-form embedding, and marking orbits.

use std::collections::HashMap;

use serde_json::{json, Value};

use super::autos::{first_lift, symplectic_generators, HeisenbergAutomorphism};
use super::cyclo::CoeffField;
use super::group::{DeltaType, HeisenbergElement};
use super::relations::{
    coefficient_size, distinct_quadrics, monomial_count, monomial_index, quadric_span_rank,
    span_stable_under, Quadric,
};
use super::rep::{translation_matrix, UnitMatrix};
use super::theta::ThetaNullVector;
use crate::error::{Error, Result};
use crate::exact::matrix::{mat_vec, Matrix};

/// A point P together with its claimed translate by s = (a, ℓ).
#[derive(Clone, Debug)]
pub struct TranslationSample<E> {
    pub a: Vec<u64>,
    pub l: Vec<u64>,
    pub point: Vec<E>,
    pub translated: Vec<E>,
}

/// Equations of a subscheme of ℙ(V(δ)) plus the certificates the check consumes.
#[derive(Clone, Debug)]
pub struct MumfordScheme<E> {
    pub delta: DeltaType,
    pub quadrics: Option<Vec<Quadric<E>>>,
    pub origin: Option<Vec<E>>,
    /// Claimed degree of the embedded variety.
    pub degree: Option<u64>,
    /// Matrix of the linear extension of the inversion.
    pub inversion: Option<Matrix<E>>,
    pub translation_samples: Vec<TranslationSample<E>>,
}

impl<E> MumfordScheme<E> {
    pub fn new(delta: &DeltaType) -> MumfordScheme<E> {
        MumfordScheme {
            delta: delta.clone(),
            quadrics: None,
            origin: None,
            degree: None,
            inversion: None,
            translation_samples: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotChecked,
}

impl Verdict {
    fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotChecked => "not-checked",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConditionResult {
    pub verdict: Verdict,
    pub detail: String,
}

impl ConditionResult {
    fn new(verdict: Verdict, detail: impl Into<String>) -> ConditionResult {
        ConditionResult {
            verdict,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MumfordReport {
    /// Conditions 1 through 5 in order.
    pub conditions: [ConditionResult; 5],
    pub origin_on_scheme: bool,
}

impl MumfordReport {
    pub fn verdict(&self, k: usize) -> Verdict {
        self.conditions[k - 1].verdict
    }

    pub fn to_json(&self) -> Value {
        let conds: Vec<Value> = self
            .conditions
            .iter()
            .enumerate()
            .map(|(k, c)| json!({"condition": k + 1, "verdict": c.verdict.as_str(), "detail": c.detail}))
            .collect();
        json!({"conditions": conds, "origin_on_scheme": self.origin_on_scheme})
    }
}

fn vanishes_at<F: CoeffField>(f: &F, q: &Quadric<F::Elem>, p: &[F::Elem]) -> bool {
    let size = p.iter().map(|x| f.to_complex(x).norm()).fold(0.0, f64::max);
    f.is_negligible(&q.eval(f, p), coefficient_size(f, q) * size * size)
}

fn projectively_equal<F: CoeffField>(f: &F, u: &[F::Elem], v: &[F::Elem]) -> bool {
    let nonzero = |w: &[F::Elem]| f.rank_rows(&[w.to_vec()], w.len()) == 1;
    nonzero(u) && nonzero(v) && f.rank_rows(&[u.to_vec(), v.to_vec()], u.len()) == 1
}

/// Dimension of {L linear : X_i·L ∈ span(quadrics) for every i}.
///
/// The map L ↦ (X_i L mod I₂)_i is assembled block-wise: rows for the images of the basis
/// vectors e_k, stacked over a block-diagonal copy of the quadric span.
fn contained_hyperplanes<F: CoeffField>(f: &F, n: usize, quads: &[Quadric<F::Elem>]) -> usize {
    let nm = monomial_count(n);
    let basis: Vec<Vec<F::Elem>> = quads.iter().map(|q| q.to_dense(f)).collect();
    let r = quadric_span_rank(f, quads);
    let mut rows = Vec::with_capacity(n + n * basis.len());
    for k in 0..n {
        let mut row = vec![f.zero(); n * nm];
        for i in 0..n {
            row[i * nm + monomial_index(n, i, k)] = f.one();
        }
        rows.push(row);
    }
    for i in 0..n {
        for b in &basis {
            let mut row = vec![f.zero(); n * nm];
            row[i * nm..(i + 1) * nm].clone_from_slice(b);
            rows.push(row);
        }
    }
    let image_rank = f.rank_rows(&rows, n * nm) - n * r;
    n - image_rank
}

/// Self-intersection g!·|δ| of a polarization of type δ.
pub fn expected_degree(delta: &DeltaType) -> u64 {
    (1..=delta.genus() as u64).product::<u64>() * delta.order() as u64
}

/// Reports each condition separately; missing certificates are an error.
pub fn mumford_form_check<F: CoeffField>(
    f: &F,
    scheme: &MumfordScheme<F::Elem>,
) -> Result<MumfordReport> {
    let mut missing = Vec::new();
    if scheme.quadrics.is_none() {
        missing.push("quadrics".to_string());
    }
    if scheme.origin.is_none() {
        missing.push("origin".to_string());
    }
    if scheme.degree.is_none() {
        missing.push("degree".to_string());
    }
    if scheme.inversion.is_none() {
        missing.push("inversion".to_string());
    }
    let (Some(quads), Some(origin), Some(degree), Some(inversion)) = (
        &scheme.quadrics,
        &scheme.origin,
        scheme.degree,
        &scheme.inversion,
    ) else {
        return Err(Error::IncompleteInput(missing));
    };
    let delta = &scheme.delta;
    let n = delta.order();
    if origin.len() != n || inversion.shape() != (n, n) || quads.iter().any(|q| q.n != n) {
        return Err(Error::DeltaMismatch);
    }
    let quads = distinct_quadrics(f, quads.iter().cloned());
    let rank = quadric_span_rank(f, &quads);
    let origin_on_scheme = quads.iter().all(|q| vanishes_at(f, q, origin));

    let hyper = contained_hyperplanes(f, n, &quads);
    let c1 = ConditionResult::new(
        Verdict::from_bool(hyper == 0),
        format!("{hyper} independent linear forms lie in the saturation"),
    );

    // h(2) is reported for g = 1; only a plane cubic would let it decide the degree
    let h2 = monomial_count(n) - rank;
    let c2 = if quads.is_empty() {
        ConditionResult::new(
            Verdict::Fail,
            "no equations: the scheme is all of projective space",
        )
    } else if degree != expected_degree(delta) {
        ConditionResult::new(
            Verdict::Fail,
            format!(
                "certified degree {degree}, expected {}",
                expected_degree(delta)
            ),
        )
    } else {
        ConditionResult::new(
            Verdict::Pass,
            format!("certified degree {degree}; quadrics leave h(2) = {h2}"),
        )
    };

    let mut unstable = Vec::new();
    for a in delta.elements() {
        for l in delta.elements() {
            let m = translation_matrix(delta, &a, &l);
            let images: Vec<_> = quads.iter().map(|q| q.substitute_monomial(f, &m)).collect();
            if !span_stable_under(f, &quads, &images) {
                unstable.push(format!("({a:?},{l:?})"));
            }
        }
    }
    let c3 = ConditionResult::new(
        Verdict::from_bool(unstable.is_empty()),
        if unstable.is_empty() {
            "ideal stable under every translation".to_string()
        } else {
            format!("not stable under {}", unstable.join(" "))
        },
    );

    let c4 = if scheme.translation_samples.is_empty() {
        ConditionResult::new(Verdict::NotChecked, "no torsion points supplied")
    } else {
        let bad: Vec<usize> = scheme
            .translation_samples
            .iter()
            .enumerate()
            .filter(|(_, s)| {
                let m = translation_matrix(delta, &s.a, &s.l);
                let on = quads
                    .iter()
                    .all(|q| vanishes_at(f, q, &s.point) && vanishes_at(f, q, &s.translated));
                !(on && projectively_equal(f, &m.apply(f, &s.point), &s.translated))
            })
            .map(|(k, _)| k)
            .collect();
        ConditionResult::new(
            Verdict::from_bool(bad.is_empty()),
            format!(
                "{} of {} samples agree",
                scheme.translation_samples.len() - bad.len(),
                scheme.translation_samples.len()
            ),
        )
    };

    let invertible = f.rank_rows(&inversion.to_rows(), n) == n;
    let images: Vec<_> = quads
        .iter()
        .map(|q| q.substitute_dense(f, inversion))
        .collect();
    let preserves = span_stable_under(f, &quads, &images);
    let fixes_origin = projectively_equal(f, &mat_vec(f, inversion, origin), origin);
    let c5 = ConditionResult::new(
        Verdict::from_bool(invertible && preserves && fixes_origin),
        format!(
            "invertible: {invertible}, preserves ideal: {preserves}, fixes origin: {fixes_origin}"
        ),
    );

    Ok(MumfordReport {
        conditions: [c1, c2, c3, c4, c5],
        origin_on_scheme,
    })
}

/// X_b ↦ X_{−b}.
pub fn standard_inversion<F: CoeffField>(f: &F, delta: &DeltaType) -> Matrix<F::Elem> {
    let n = delta.order();
    Matrix::from_fn(n, n, |i, j| {
        if delta.index(&delta.neg(&delta.element(j))) == i {
            f.one()
        } else {
            f.zero()
        }
    })
}

/// Projective dedup keyed by a rounded fingerprint; neighbouring keys are also searched.
struct PointSet<'a, F: CoeffField> {
    f: &'a F,
    points: Vec<Vec<F::Elem>>,
    buckets: HashMap<i64, Vec<usize>>,
}

impl<'a, F: CoeffField> PointSet<'a, F> {
    fn new(f: &'a F) -> Self {
        PointSet {
            f,
            points: Vec::new(),
            buckets: HashMap::new(),
        }
    }

    fn key(&self, v: &[F::Elem]) -> i64 {
        let s: f64 = v.iter().map(|x| self.f.to_complex(x).norm_sqr()).sum();
        (s.ln() * 1e6).round() as i64
    }

    /// Inserts the normalized point, returning its index when it is new.
    fn insert(&mut self, v: &[F::Elem]) -> Option<usize> {
        let v = self.f.projective_normalize(v);
        let k = self.key(&v);
        for kk in [k - 1, k, k + 1] {
            if let Some(b) = self.buckets.get(&kk) {
                if b.iter().any(|&i| self.f.same_point(&self.points[i], &v)) {
                    return None;
                }
            }
        }
        self.buckets.entry(k).or_default().push(self.points.len());
        self.points.push(v);
        Some(self.points.len() - 1)
    }
}

/// Intertwiners of a generating set of Aut_{𝔾_m} 𝒢(δ): lifts of the symplectic generators and
/// conjugations by the Heisenberg generators.
pub fn automorphism_generators(delta: &DeltaType) -> Result<Vec<HeisenbergAutomorphism>> {
    let mut gens = symplectic_generators(delta)
        .iter()
        .map(first_lift)
        .collect::<Result<Vec<_>>>()?;
    gens.extend(
        HeisenbergElement::generators(delta)
            .iter()
            .map(HeisenbergAutomorphism::inner),
    );
    Ok(gens)
}

/// {f_φ(Q)} over the group generated by [`automorphism_generators`], up to scalar.
pub fn marking_orbit<F: CoeffField>(
    f: &F,
    q: &ThetaNullVector<F::Elem>,
    budget: usize,
) -> Result<Vec<Vec<F::Elem>>> {
    let gens: Vec<UnitMatrix> = automorphism_generators(&q.delta)?
        .iter()
        .map(|a| a.intertwiner())
        .collect::<Result<_>>()?;
    let mut set = PointSet::new(f);
    set.insert(&q.coords);
    let mut next = 0;
    while next < set.points.len() {
        let v = set.points[next].clone();
        next += 1;
        for g in &gens {
            if set.insert(&g.apply(f, &v)).is_some() && set.points.len() > budget {
                return Err(Error::TooLarge(format!(
                    "marking orbit exceeds {budget} points"
                )));
            }
        }
    }
    Ok(set.points)
}

/// {f_φ(Q)} for the listed automorphisms, up to scalar.
pub fn marking_orbit_of<F: CoeffField>(
    f: &F,
    q: &ThetaNullVector<F::Elem>,
    autos: &[HeisenbergAutomorphism],
) -> Result<Vec<Vec<F::Elem>>> {
    let mut set = PointSet::new(f);
    for a in autos {
        set.insert(&a.intertwiner()?.apply(f, &q.coords));
    }
    Ok(set.points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::Field;
    use crate::heisenberg::cyclo::Cyclotomic;

    #[test]
    fn missing_certificates_are_listed() {
        let k = Cyclotomic::new(16);
        let d = DeltaType::new(vec![8]).unwrap();
        let mut s = MumfordScheme::new(&d);
        s.degree = Some(8);
        match mumford_form_check(&k, &s) {
            Err(Error::IncompleteInput(v)) => {
                assert_eq!(v, vec!["quadrics", "origin", "inversion"])
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn standard_inversion_is_an_involution() {
        let k = Cyclotomic::new(16);
        let d = DeltaType::new(vec![8]).unwrap();
        let m = standard_inversion(&k, &d);
        let v: Vec<_> = (0..8).map(|i| k.from_i64(i)).collect();
        let w = mat_vec(&k, &m, &v);
        assert_eq!(w[1], k.from_i64(7));
        assert_eq!(mat_vec(&k, &m, &w), v);
    }
}
