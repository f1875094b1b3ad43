//! Riemann quadratic relations among the coordinates X_b, b ∈ K(δ).

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use super::cyclo::CoeffField;
use super::group::DeltaType;
use super::rep::MonomialMatrix;
use super::theta::ThetaNullVector;
use crate::exact::field::Field;
use crate::exact::matrix::Matrix;

/// A quadratic form Σ_{i ≤ j} c_ij X_i X_j in n variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadric<E> {
    pub n: usize,
    pub terms: BTreeMap<(usize, usize), E>,
}

/// Position of X_i X_j (i ≤ j) in the lexicographic list of degree-two monomials.
pub fn monomial_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

pub fn monomial_count(n: usize) -> usize {
    n * (n + 1) / 2
}

impl<E: Clone> Quadric<E> {
    pub fn zero(n: usize) -> Quadric<E> {
        Quadric {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term<F: Field<Elem = E>>(&mut self, f: &F, i: usize, j: usize, c: &E) {
        let key = if i <= j { (i, j) } else { (j, i) };
        let v = match self.terms.get(&key) {
            Some(old) => f.add(old, c),
            None => c.clone(),
        };
        if f.is_zero(&v) {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Quadric<E> {
        let mut q = Quadric::zero(self.n);
        for (&(i, j), v) in &self.terms {
            q.add_term(f, i, j, &f.mul(v, c));
        }
        q
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, x: &[E]) -> E {
        self.terms.iter().fold(f.zero(), |acc, (&(i, j), c)| {
            f.add(&acc, &f.mul(c, &f.mul(&x[i], &x[j])))
        })
    }

    /// Coefficient vector in the order of [`monomial_index`].
    pub fn to_dense<F: Field<Elem = E>>(&self, f: &F) -> Vec<E> {
        let mut v = vec![f.zero(); monomial_count(self.n)];
        for (&(i, j), c) in &self.terms {
            v[monomial_index(self.n, i, j)] = c.clone();
        }
        v
    }

    /// q(M·X) for a monomial M: (M X)_{perm[j]} = coef[j]·X_j.
    pub fn substitute_monomial<F: CoeffField<Elem = E>>(
        &self,
        f: &F,
        m: &MonomialMatrix,
    ) -> Quadric<E> {
        let mut source = vec![(0usize, f.zero()); self.n];
        for (j, (&p, c)) in m.perm.iter().zip(&m.coef).enumerate() {
            source[p] = (j, c.to_field(f));
        }
        let mut q = Quadric::zero(self.n);
        for (&(i, k), c) in &self.terms {
            let (ji, ci) = &source[i];
            let (jk, ck) = &source[k];
            q.add_term(f, *ji, *jk, &f.mul(c, &f.mul(ci, ck)));
        }
        q
    }

    /// q(N·X) for a dense n×n matrix N.
    pub fn substitute_dense<F: Field<Elem = E>>(&self, f: &F, m: &Matrix<E>) -> Quadric<E> {
        let mut q = Quadric::zero(self.n);
        for (&(i, k), c) in &self.terms {
            for j in 0..self.n {
                let a = m.get(i, j);
                if f.is_zero(a) {
                    continue;
                }
                let ca = f.mul(c, a);
                for l in 0..self.n {
                    let b = m.get(k, l);
                    if !f.is_zero(b) {
                        q.add_term(f, j, l, &f.mul(&ca, b));
                    }
                }
            }
        }
        q
    }

    /// Sparse JSON keyed by "i,j".
    pub fn to_json<F: CoeffField<Elem = E>>(&self, f: &F) -> Value {
        let map: serde_json::Map<String, Value> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| (format!("{i},{j}"), f.elem_to_json(c)))
            .collect();
        Value::Object(map)
    }
}

/// Sum of coefficient moduli, the scale used for tolerance tests.
pub fn coefficient_size<F: CoeffField>(f: &F, q: &Quadric<F::Elem>) -> f64 {
    q.terms.values().map(|c| f.to_complex(c).norm()).sum()
}

/// Which subgroup Z₂ ⊂ K(δ) the characters l are taken on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Z2Choice {
    /// Z₂ = 2K(δ), the points divisible by two; l_ε(η) = (−1)^{Σ εᵢηᵢ/2}.
    #[default]
    DivisibleByTwo,
    /// Z₂ = K(δ)[2]; l_ε(η) = (−1)^{Σ εᵢ[ηᵢ ≠ 0]}.
    TwoTorsion,
}

impl Z2Choice {
    fn subgroup(&self, delta: &DeltaType) -> Vec<Vec<u64>> {
        let d = delta.divisors();
        delta
            .elements()
            .into_iter()
            .filter(|e| match self {
                Z2Choice::DivisibleByTwo => e.iter().all(|x| x % 2 == 0),
                Z2Choice::TwoTorsion => e.iter().zip(d).all(|(x, di)| *x == 0 || *x == di / 2),
            })
            .collect()
    }

    fn sign(&self, delta: &DeltaType, eps: &[u8], eta: &[u64]) -> bool {
        let d = delta.divisors();
        let parity: u64 = eps
            .iter()
            .zip(eta)
            .zip(d)
            .map(|((&e, &x), &di)| {
                let h = match self {
                    Z2Choice::DivisibleByTwo => x / 2,
                    Z2Choice::TwoTorsion => (x == di / 2) as u64,
                };
                e as u64 * h
            })
            .sum();
        parity % 2 == 1
    }
}

/// The quadric attached to (a, b, c, d, l) with a, b, c, d ∈ K(2δ) congruent modulo K(δ).
#[derive(Clone, Debug)]
pub struct RiemannRelation<E> {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    pub d: Vec<u64>,
    /// ε ∈ {0,1}^g indexing the character l_ε.
    pub character: Vec<u8>,
    pub quadric: Quadric<E>,
}

impl<E: Clone> RiemannRelation<E> {
    pub fn to_json<F: CoeffField<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "a": self.a, "b": self.b, "c": self.c, "d": self.d,
            "character": self.character,
            "quadric": self.quadric.to_json(f),
        })
    }
}

/// ((x + y)/2, (x − y)/2) in K(δ) for x, y ∈ K(2δ) of equal parity.
fn halves(delta: &DeltaType, x: &[u64], y: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let d = delta.divisors();
    let mut s = Vec::with_capacity(d.len());
    let mut t = Vec::with_capacity(d.len());
    for i in 0..d.len() {
        let m = 2 * d[i];
        s.push(((x[i] + y[i]) % m / 2) % d[i]);
        t.push(((x[i] + m - y[i]) % m / 2) % d[i]);
    }
    (s, t)
}

struct RelationBuilder<'a, F: CoeffField> {
    f: &'a F,
    delta: &'a DeltaType,
    choice: Z2Choice,
    z2: Vec<Vec<u64>>,
    q: &'a ThetaNullVector<F::Elem>,
    cache: HashMap<(Vec<u64>, Vec<u64>, Vec<u8>), F::Elem>,
}

impl<F: CoeffField> RelationBuilder<'_, F> {
    /// Index pairs and signs of Σ_η l(η) X_{s+η} X_{t+η}.
    fn terms(&self, s: &[u64], t: &[u64], eps: &[u8]) -> Vec<(usize, usize, bool)> {
        self.z2
            .iter()
            .map(|eta| {
                (
                    self.delta.index(&self.delta.add(s, eta)),
                    self.delta.index(&self.delta.add(t, eta)),
                    self.choice.sign(self.delta, eps, eta),
                )
            })
            .collect()
    }

    /// Σ_η l(η) Q_{(x+y)/2+η} Q_{(x−y)/2+η}.
    fn value(&mut self, x: &[u64], y: &[u64], eps: &[u8]) -> F::Elem {
        let key = (x.to_vec(), y.to_vec(), eps.to_vec());
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let f = self.f;
        let (s, t) = halves(self.delta, x, y);
        let v = self
            .terms(&s, &t, eps)
            .into_iter()
            .fold(f.zero(), |acc, (i, j, neg)| {
                let p = f.mul(&self.q.coords[i], &self.q.coords[j]);
                if neg {
                    f.sub(&acc, &p)
                } else {
                    f.add(&acc, &p)
                }
            });
        self.cache.insert(key, v.clone());
        v
    }

    fn push(&self, quad: &mut Quadric<F::Elem>, x: &[u64], y: &[u64], eps: &[u8], scale: &F::Elem) {
        let (s, t) = halves(self.delta, x, y);
        let neg_scale = self.f.neg(scale);
        for (i, j, neg) in self.terms(&s, &t, eps) {
            quad.add_term(self.f, i, j, if neg { &neg_scale } else { scale });
        }
    }
}

/// All elements of K(2δ) whose coordinates have the given parities.
fn parity_class(delta: &DeltaType, parity: &[u64]) -> Vec<Vec<u64>> {
    delta
        .elements()
        .into_iter()
        .map(|u| u.iter().zip(parity).map(|(x, p)| 2 * x + p).collect())
        .collect()
}

/// One relation per admissible tuple, with Z₂ = 2K(δ).
pub fn riemann_relations<F: CoeffField>(
    f: &F,
    q: &ThetaNullVector<F::Elem>,
) -> Vec<RiemannRelation<F::Elem>> {
    riemann_relations_with(f, q, Z2Choice::default())
}

/// For each (a, b, c, d, ε):
/// Σ l(η) X_{(a+b)/2+η} X_{(a−b)/2+η} · S(c, d) − Σ l(η) X_{(a+d)/2+η} X_{(a−d)/2+η} · S(c, b),
/// where S(x, y) = Σ l(η) Q_{(x+y)/2+η} Q_{(x−y)/2+η}.
pub fn riemann_relations_with<F: CoeffField>(
    f: &F,
    q: &ThetaNullVector<F::Elem>,
    choice: Z2Choice,
) -> Vec<RiemannRelation<F::Elem>> {
    let delta = &q.delta;
    let g = delta.genus();
    let n = delta.order();
    let mut b = RelationBuilder {
        f,
        delta,
        choice,
        z2: choice.subgroup(delta),
        q,
        cache: HashMap::new(),
    };
    let characters: Vec<Vec<u8>> = (0..1u64 << g)
        .map(|k| (0..g).map(|i| ((k >> i) & 1) as u8).collect())
        .collect();
    let mut out = Vec::new();
    for pbits in 0..1u64 << g {
        let parity: Vec<u64> = (0..g).map(|i| (pbits >> i) & 1).collect();
        let class = parity_class(delta, &parity);
        for xa in &class {
            for xb in &class {
                for xc in &class {
                    for xd in &class {
                        for eps in &characters {
                            let s_cd = b.value(xc, xd, eps);
                            let s_cb = f.neg(&b.value(xc, xb, eps));
                            let mut quad = Quadric::zero(n);
                            b.push(&mut quad, xa, xb, eps, &s_cd);
                            b.push(&mut quad, xa, xd, eps, &s_cb);
                            out.push(RiemannRelation {
                                a: xa.clone(),
                                b: xb.clone(),
                                c: xc.clone(),
                                d: xd.clone(),
                                character: eps.clone(),
                                quadric: quad,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Whether two quadrics agree up to a nonzero scalar.
pub fn proportional<F: CoeffField>(f: &F, p: &Quadric<F::Elem>, q: &Quadric<F::Elem>) -> bool {
    if p.is_zero() || q.is_zero() {
        return p.is_zero() && q.is_zero();
    }
    f.rank_rows(&[p.to_dense(f), q.to_dense(f)], monomial_count(p.n)) == 1
}

/// Nonzero quadrics up to scalar, in order of first appearance.
pub fn distinct_quadrics<F: CoeffField>(
    f: &F,
    quads: impl IntoIterator<Item = Quadric<F::Elem>>,
) -> Vec<Quadric<F::Elem>> {
    let mut reps: Vec<Quadric<F::Elem>> = Vec::new();
    let mut by_support: HashMap<Vec<(usize, usize)>, Vec<usize>> = HashMap::new();
    for q in quads {
        if q.is_zero() {
            continue;
        }
        let support: Vec<(usize, usize)> = q.terms.keys().copied().collect();
        let bucket = by_support.entry(support).or_default();
        if !bucket.iter().any(|&k| proportional(f, &reps[k], &q)) {
            bucket.push(reps.len());
            reps.push(q);
        }
    }
    reps
}

/// Rank of the span of the quadrics in the space of degree-two forms.
pub fn quadric_span_rank<F: CoeffField>(f: &F, quads: &[Quadric<F::Elem>]) -> usize {
    let Some(first) = quads.first() else { return 0 };
    let rows: Vec<Vec<F::Elem>> = quads.iter().map(|q| q.to_dense(f)).collect();
    f.rank_rows(&rows, monomial_count(first.n))
}

/// Whether every image q∘M lies in the span of `quads`.
pub fn span_stable_under<F: CoeffField>(
    f: &F,
    quads: &[Quadric<F::Elem>],
    images: &[Quadric<F::Elem>],
) -> bool {
    let r = quadric_span_rank(f, quads);
    let mut all = quads.to_vec();
    all.extend_from_slice(images);
    quadric_span_rank(f, &all) == r
}

/// Translations s = (a, ℓ) under which some quadric is not proportional to a member of the set.
pub fn set_stability_failures<F: CoeffField>(
    f: &F,
    delta: &DeltaType,
    quads: &[Quadric<F::Elem>],
) -> Vec<(Vec<u64>, Vec<u64>)> {
    let mut failures = Vec::new();
    for a in delta.elements() {
        for l in delta.elements() {
            let m = super::rep::translation_matrix(delta, &a, &l);
            let ok = quads.iter().all(|q| {
                let img = q.substitute_monomial(f, &m);
                quads
                    .iter()
                    .any(|r| r.terms.len() == img.terms.len() && proportional(f, r, &img))
            });
            if !ok {
                failures.push((a.clone(), l));
            }
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::cyclo::Cyclotomic;
    use crate::heisenberg::rep::translation_matrix;

    #[test]
    fn monomial_indices_are_a_bijection() {
        let n = 8;
        let mut seen = vec![false; monomial_count(n)];
        for i in 0..n {
            for j in i..n {
                assert!(!seen[monomial_index(n, i, j)]);
                seen[monomial_index(n, i, j)] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn monomial_substitution_matches_dense() {
        let k = Cyclotomic::new(16);
        let d = DeltaType::new(vec![8]).unwrap();
        let mut q = Quadric::zero(8);
        q.add_term(&k, 0, 3, &k.from_i64(2));
        q.add_term(&k, 5, 5, &k.root_of_unity(3));
        q.add_term(&k, 7, 1, &k.from_i64(-1));
        let m = translation_matrix(&d, &[3], &[5]);
        assert_eq!(
            q.substitute_monomial(&k, &m),
            q.substitute_dense(&k, &m.to_dense(&k))
        );
    }

    #[test]
    fn relation_count_at_level_eight() {
        let k = Cyclotomic::new(16);
        let d = DeltaType::new(vec![8]).unwrap();
        let coords = (0..8).map(|i| k.from_i64(i + 1)).collect();
        let q = ThetaNullVector::new(&k, &d, coords).unwrap();
        let rels = riemann_relations(&k, &q);
        assert_eq!(rels.len(), 4 * 8usize.pow(4));
        assert!(rels
            .iter()
            .filter(|r| r.b == r.d)
            .all(|r| r.quadric.is_zero()));
    }
}
