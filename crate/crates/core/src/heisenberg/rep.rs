//! The standard representation V(δ), translation matrices and intertwining systems.

use std::collections::VecDeque;

use serde_json::{json, Value};

use super::cyclo::CoeffField;
use super::group::{DeltaType, HeisenbergElement, Unit};
use crate::exact::matrix::Matrix;

/// A matrix with exactly one nonzero entry per column: column j has `coef[j]` in row `perm[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialMatrix {
    pub perm: Vec<usize>,
    pub coef: Vec<Unit>,
}

impl MonomialMatrix {
    pub fn identity(n: usize, m: u64) -> MonomialMatrix {
        MonomialMatrix {
            perm: (0..n).collect(),
            coef: vec![Unit::one(m); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn mul(&self, o: &MonomialMatrix) -> MonomialMatrix {
        let perm = o.perm.iter().map(|&k| self.perm[k]).collect();
        let coef = o
            .perm
            .iter()
            .zip(&o.coef)
            .map(|(&k, c)| self.coef[k].mul(c))
            .collect();
        MonomialMatrix { perm, coef }
    }

    pub fn inverse(&self) -> MonomialMatrix {
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut coef = vec![Unit::one(self.coef[0].m); n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            coef[self.perm[j]] = self.coef[j].inv();
        }
        MonomialMatrix { perm, coef }
    }

    /// Whether the matrix is c·I.
    pub fn scalar(&self) -> Option<&Unit> {
        let c = self.coef.first()?;
        (self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.coef.iter().all(|x| x == c))
            .then_some(c)
    }

    /// Equal to `o` up to a nonzero scalar.
    pub fn projectively_equal(&self, o: &MonomialMatrix) -> bool {
        if self.perm != o.perm {
            return false;
        }
        let r = self.coef[0].div(&o.coef[0]);
        self.coef.iter().zip(&o.coef).all(|(a, b)| a.div(b) == r)
    }

    pub fn apply<F: CoeffField>(&self, f: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![f.zero(); v.len()];
        for (j, x) in v.iter().enumerate() {
            if !f.is_zero(x) {
                out[self.perm[j]] = self.coef[j].mul_into(f, x);
            }
        }
        out
    }

    pub fn to_dense<F: CoeffField>(&self, f: &F) -> Matrix<F::Elem> {
        let n = self.dim();
        let mut m = Matrix::filled(n, n, f.zero());
        for j in 0..n {
            m.set(self.perm[j], j, self.coef[j].to_field(f));
        }
        m
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = (0..self.dim())
            .map(|j| json!({"row": self.perm[j], "col": j, "scale": crate::exact::rational::fmt_rat(&self.coef[j].scale), "root": self.coef[j].root}))
            .collect();
        json!({"dim": self.dim(), "root_order": self.coef.first().map(|c| c.m), "entries": entries})
    }
}

/// ρ(t, a, ℓ) on the coordinates: X_b ↦ t⟨b, ℓ⟩ X_{b+a}.
///
/// This is the transpose of the function action f ↦ (x ↦ t⟨x, ℓ⟩ f(x + a)); with the group law
/// (t₁t₂⟨a₂, ℓ₁⟩, …) it is the transpose that is multiplicative.
pub fn std_rep(x: &HeisenbergElement) -> MonomialMatrix {
    let dl = &x.delta;
    let n = dl.order();
    let mut perm = Vec::with_capacity(n);
    let mut coef = Vec::with_capacity(n);
    for j in 0..n {
        let b = dl.element(j);
        perm.push(dl.index(&dl.add(&b, &x.a)));
        coef.push(x.t.times_root(dl.pairing(&b, &x.l)));
    }
    MonomialMatrix { perm, coef }
}

/// f_s on point coordinates: (f_s P)_b = ⟨b, ℓ⟩ P_{a+b}, scaled so that f_s^*(X_0) = X_a.
pub fn translation_matrix(delta: &DeltaType, a: &[u64], l: &[u64]) -> MonomialMatrix {
    let n = delta.order();
    let m = delta.root_order();
    let mut perm = vec![0; n];
    let mut coef = vec![Unit::one(m); n];
    for b in 0..n {
        let bv = delta.element(b);
        let col = delta.index(&delta.add(&bv, a));
        perm[col] = b;
        coef[col] = Unit::root(delta.pairing(&bv, l), m);
    }
    MonomialMatrix { perm, coef }
}

/// Dense matrix with entries in μ_m·ℚ^× ∪ {0}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitMatrix {
    pub n: usize,
    pub entries: Vec<Option<Unit>>,
}

impl UnitMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<&Unit> {
        self.entries[i * self.n + j].as_ref()
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    pub fn apply<F: CoeffField>(&self, f: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(f.zero(), |acc, j| match self.get(i, j) {
                    Some(u) if !f.is_zero(&v[j]) => f.add(&acc, &u.mul_into(f, &v[j])),
                    _ => acc,
                })
            })
            .collect()
    }

    pub fn to_dense<F: CoeffField>(&self, f: &F) -> Matrix<F::Elem> {
        Matrix::from_fn(self.n, self.n, |i, j| {
            self.get(i, j).map_or_else(|| f.zero(), |u| u.to_field(f))
        })
    }

    pub fn from_monomial(m: &MonomialMatrix) -> UnitMatrix {
        let n = m.dim();
        let mut entries = vec![None; n * n];
        for j in 0..n {
            entries[m.perm[j] * n + j] = Some(m.coef[j].clone());
        }
        UnitMatrix { n, entries }
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = (0..self.n * self.n)
            .filter_map(|k| {
                self.entries[k].as_ref().map(|u| {
                    json!({"row": k / self.n, "col": k % self.n, "scale": crate::exact::rational::fmt_rat(&u.scale), "root": u.root})
                })
            })
            .collect();
        json!({"dim": self.n, "entries": entries})
    }
}

/// Solutions of x_u = w·x_v over the graph of all relations: one basis vector per connected
/// component whose cycle products are all 1, the others being forced to zero.
fn solve_two_term(
    unknowns: usize,
    edges: &[(usize, usize, Unit)],
    m: u64,
) -> Vec<Vec<Option<Unit>>> {
    let mut adj: Vec<Vec<(usize, Unit)>> = vec![Vec::new(); unknowns];
    for (u, v, w) in edges {
        // x_u = w x_v and x_v = w⁻¹ x_u.
        adj[*v].push((*u, w.clone()));
        adj[*u].push((*v, w.inv()));
    }
    let mut comp = vec![usize::MAX; unknowns];
    let mut pot: Vec<Option<Unit>> = vec![None; unknowns];
    let mut basis = Vec::new();
    for start in 0..unknowns {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = start;
        comp[start] = id;
        pot[start] = Some(Unit::one(m));
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        let mut consistent = true;
        while let Some(v) = queue.pop_front() {
            let pv = pot[v].clone().expect("visited");
            for (u, w) in &adj[v] {
                let want = w.mul(&pv);
                match &pot[*u] {
                    None => {
                        comp[*u] = id;
                        pot[*u] = Some(want);
                        members.push(*u);
                        queue.push_back(*u);
                    }
                    Some(p) if *p != want => consistent = false,
                    Some(_) => {}
                }
            }
        }
        if consistent {
            let mut vec = vec![None; unknowns];
            for k in members {
                vec[k] = pot[k].clone();
            }
            basis.push(vec);
        }
    }
    basis
}

/// Equations of f·P = Q·f on the n² entries of f, as relations f[u] = w·f[v].
fn intertwining_edges(pairs: &[(MonomialMatrix, MonomialMatrix)]) -> Vec<(usize, usize, Unit)> {
    let mut edges = Vec::new();
    for (p, q) in pairs {
        let n = p.dim();
        let qinv: Vec<usize> = {
            let mut v = vec![0; n];
            for (k, &r) in q.perm.iter().enumerate() {
                v[r] = k;
            }
            v
        };
        for i in 0..n {
            let k = qinv[i];
            for j in 0..n {
                // (fP)[i][j] = f[i][p(j)]·c_j and (Qf)[i][j] = d_k·f[k][j] with q(k) = i.
                let w = q.coef[k].div(&p.coef[j]);
                edges.push((i * n + p.perm[j], k * n + j, w));
            }
        }
    }
    edges
}

/// Basis of {f : f·P = Q·f for every pair (P, Q)}.
pub fn intertwining_space(pairs: &[(MonomialMatrix, MonomialMatrix)]) -> Vec<UnitMatrix> {
    let Some((p0, _)) = pairs.first() else {
        return Vec::new();
    };
    let n = p0.dim();
    let m = p0.coef[0].m;
    solve_two_term(n * n, &intertwining_edges(pairs), m)
        .into_iter()
        .map(|entries| normalize(UnitMatrix { n, entries }))
        .collect()
}

/// Scales so that the first nonzero entry in row-major order is 1.
fn normalize(mut f: UnitMatrix) -> UnitMatrix {
    if let Some(first) = f.entries.iter().flatten().next().cloned() {
        let inv = first.inv();
        for e in f.entries.iter_mut().flatten() {
            *e = e.mul(&inv);
        }
    }
    f
}

/// The same system as a dense n²-column matrix over `f`, for independent rank computations.
pub fn intertwining_system_dense<F: CoeffField>(
    f: &F,
    pairs: &[(MonomialMatrix, MonomialMatrix)],
) -> Matrix<F::Elem> {
    let n = pairs.first().map_or(0, |(p, _)| p.dim());
    let rows: Vec<Vec<F::Elem>> = intertwining_edges(pairs)
        .into_iter()
        .map(|(u, v, w)| {
            let mut row = vec![f.zero(); n * n];
            row[u] = f.add(&row[u], &f.one());
            row[v] = f.sub(&row[v], &w.to_field(f));
            row
        })
        .collect();
    Matrix::from_rows(rows, n * n)
}

/// Dimension of the commutant of ρ(𝒢(δ)), from the generators.
pub fn commutant_dimension(delta: &DeltaType) -> usize {
    let pairs: Vec<_> = HeisenbergElement::generators(delta)
        .iter()
        .map(|g| (std_rep(g), std_rep(g)))
        .collect();
    intertwining_space(&pairs).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::cyclo::Cyclotomic;

    fn d8() -> DeltaType {
        DeltaType::new(vec![8]).unwrap()
    }

    #[test]
    fn shift_and_diagonal() {
        let d = d8();
        let shift = std_rep(&HeisenbergElement::lift(&d, &[1], &[0]));
        assert_eq!(shift.perm, vec![1, 2, 3, 4, 5, 6, 7, 0]);
        assert!(shift.coef.iter().all(Unit::is_one));
        let diag = std_rep(&HeisenbergElement::lift(&d, &[0], &[1]));
        assert_eq!(diag.perm, (0..8).collect::<Vec<_>>());
        // ζ₈^x = ζ₁₆^{2x}.
        assert_eq!(
            diag.coef.iter().map(|c| c.root).collect::<Vec<_>>(),
            vec![0, 2, 4, 6, 8, 10, 12, 14]
        );
        let t = Unit::root(5, 16);
        assert_eq!(
            std_rep(&HeisenbergElement::scalar(&d, t.clone())).scalar(),
            Some(&t)
        );
    }

    #[test]
    fn commutant_is_one_dimensional() {
        assert_eq!(commutant_dimension(&d8()), 1);
        assert_eq!(commutant_dimension(&DeltaType::new(vec![16]).unwrap()), 1);
    }

    #[test]
    fn translation_matrices_compose_projectively() {
        let d = d8();
        let f1 = translation_matrix(&d, &[3], &[5]);
        let f2 = translation_matrix(&d, &[6], &[1]);
        let f12 = translation_matrix(&d, &[1], &[6]);
        assert!(f1.mul(&f2).projectively_equal(&f12));
        assert!(f1.mul(&f1.inverse()).scalar().is_some());
        let k = Cyclotomic::new(16);
        assert_eq!(f1.to_dense(&k).rows(), 8);
    }
}
