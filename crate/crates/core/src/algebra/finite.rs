//! Finite-dimensional algebras over a prime field 𝔽_p.

use crate::exact::factor::{factor_mod_p, FpPoly};
use crate::exact::field::{Field, PrimeField};
use crate::exact::matrix::{kernel, rref, Matrix};

/// An associative unital 𝔽_p-algebra given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpAlgebra {
    pub p: u64,
    dim: usize,
    mult: Vec<Vec<Vec<u64>>>,
    unit: Vec<u64>,
}

/// A subspace in reduced echelon form; coordinates of members are their pivot entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
    pub ambient: usize,
}

impl Subspace {
    pub fn span(p: u64, vecs: &[Vec<u64>], ambient: usize) -> Subspace {
        let f = PrimeField::new(p);
        if vecs.is_empty() {
            return Subspace {
                rows: vec![],
                pivots: vec![],
                ambient,
            };
        }
        let (r, pivots) = rref(&f, &Matrix::from_rows(vecs.to_vec(), ambient));
        let rows = (0..pivots.len()).map(|i| r.row_vec(i)).collect();
        Subspace {
            rows,
            pivots,
            ambient,
        }
    }

    pub fn whole(p: u64, n: usize) -> Subspace {
        let vecs: Vec<Vec<u64>> = (0..n).map(|i| unit_vec(n, i)).collect();
        Subspace::span(p, &vecs, n)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// `v` minus its component along the pivot rows.
    pub fn reduce(&self, p: u64, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + p - c * r % p) % p;
                }
            }
        }
        v
    }

    pub fn contains(&self, p: u64, v: &[u64]) -> bool {
        self.reduce(p, v).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, p: u64, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(p, r))
    }

    /// Coordinates of a member in the echelon basis.
    pub fn coords(&self, v: &[u64]) -> Vec<u64> {
        self.pivots.iter().map(|&pc| v[pc]).collect()
    }

    pub fn combine(&self, p: u64, c: &[u64]) -> Vec<u64> {
        let mut v = vec![0; self.ambient];
        for (ci, row) in c.iter().zip(&self.rows) {
            for (x, r) in v.iter_mut().zip(row) {
                *x = (*x + ci * r) % p;
            }
        }
        v
    }

    pub fn sum(&self, p: u64, other: &Subspace) -> Subspace {
        let vecs: Vec<Vec<u64>> = self.rows.iter().chain(&other.rows).cloned().collect();
        Subspace::span(p, &vecs, self.ambient)
    }
}

pub fn unit_vec(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn mat_pow_mod(m: &[Vec<u128>], mut e: u128, modulus: u128) -> Vec<Vec<u128>> {
    let n = m.len();
    let mul = |a: &[Vec<u128>], b: &[Vec<u128>]| -> Vec<Vec<u128>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(0u128, |acc, k| (acc + a[i][k] * b[k][j]) % modulus))
                    .collect()
            })
            .collect()
    };
    let mut result: Vec<Vec<u128>> = (0..n)
        .map(|i| (0..n).map(|j| u128::from(i == j)).collect())
        .collect();
    let mut base = m.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    result
}

impl FpAlgebra {
    pub fn new(p: u64, mult: Vec<Vec<Vec<u64>>>, unit: Vec<u64>) -> FpAlgebra {
        let dim = mult.len();
        FpAlgebra { p, dim, mult, unit }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn one(&self) -> Vec<u64> {
        self.unit.clone()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.dim]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u64> {
        unit_vec(self.dim, i)
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p as u128;
        let mut out = vec![0u128; self.dim];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = (x as u128 * y as u128) % p;
                for (k, &c) in self.mult[i][j].iter().enumerate() {
                    if c != 0 {
                        out[k] = (out[k] + xy * c as u128) % p;
                    }
                }
            }
        }
        out.into_iter().map(|x| x as u64).collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.p - y) % self.p)
            .collect()
    }

    pub fn scale(&self, s: u64, a: &[u64]) -> Vec<u64> {
        a.iter()
            .map(|x| ((*x as u128 * s as u128) % self.p as u128) as u64)
            .collect()
    }

    pub fn pow(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut r = self.one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    pub fn is_zero(a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Span of all products x·y with x ∈ a, y ∈ b.
    pub fn product_space(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vecs = Vec::new();
        for x in &a.rows {
            for y in &b.rows {
                vecs.push(self.mul(x, y));
            }
        }
        Subspace::span(self.p, &vecs, self.dim)
    }

    /// Jacobson radical by the trace-power criterion: I_{-1} = A and
    /// I_i = {x ∈ I_{i-1} : g_i(x y) = 0 for all y}, where g_i(z) = Tr(Z̃^{p^i})/p^i mod p on
    /// an integer lift Z̃ of the left regular matrix; the radical is I_l for p^l ≤ dim < p^{l+1}.
    pub fn radical(&self) -> Subspace {
        let p = self.p;
        let n = self.dim;
        let mut l = 0u32;
        while (p as u128).pow(l + 1) <= n as u128 {
            l += 1;
        }
        let mut current = Subspace::whole(p, n);
        for i in 0..=l {
            if current.dim() == 0 {
                break;
            }
            let pi = (p as u128).pow(i);
            let modulus = pi * p as u128;
            let g = |z: &[u64]| -> u64 {
                let m: Vec<Vec<u128>> = (0..n)
                    .map(|r| {
                        (0..n)
                            .map(|c| {
                                z.iter().enumerate().fold(0u128, |acc, (k, &zk)| {
                                    (acc + zk as u128 * self.mult[k][c][r] as u128) % modulus
                                })
                            })
                            .collect()
                    })
                    .collect();
                let t = mat_pow_mod(&m, pi, modulus);
                let tr = (0..n).fold(0u128, |acc, d| (acc + t[d][d]) % modulus);
                debug_assert_eq!(tr % pi, 0);
                ((tr / pi) % p as u128) as u64
            };
            // Row j of the constraint matrix: coefficient k is g_i(v_k b_j).
            let rows: Vec<Vec<u64>> = (0..n)
                .map(|j| {
                    current
                        .rows
                        .iter()
                        .map(|v| g(&self.mul(v, &self.basis_vector(j))))
                        .collect()
                })
                .collect();
            let ker = kernel(&PrimeField::new(p), &Matrix::from_rows(rows, current.dim()));
            let vecs: Vec<Vec<u64>> = ker.iter().map(|c| current.combine(p, c)).collect();
            current = Subspace::span(p, &vecs, n);
        }
        current
    }

    pub fn center(&self) -> Subspace {
        let n = self.dim;
        let p = self.p;
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                rows.push(
                    (0..n)
                        .map(|l| (self.mult[l][i][k] + p - self.mult[i][l][k]) % p)
                        .collect::<Vec<_>>(),
                );
            }
        }
        let ker = kernel(&PrimeField::new(p), &Matrix::from_rows(rows, n));
        Subspace::span(p, &ker, n)
    }

    /// The algebra structure on a multiplicatively closed subspace with its own unit.
    pub fn subalgebra(&self, space: &Subspace, unit: &[u64]) -> FpAlgebra {
        let m = space.dim();
        let mult = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| space.coords(&self.mul(&space.rows[i], &space.rows[j])))
                    .collect()
            })
            .collect();
        FpAlgebra::new(self.p, mult, space.coords(unit))
    }

    /// The quotient by a two-sided ideal.
    pub fn quotient(&self, ideal: &Subspace) -> Quotient {
        let complement: Vec<usize> = (0..self.dim)
            .filter(|c| !ideal.pivots.contains(c))
            .collect();
        let m = complement.len();
        let lift = |i: usize| unit_vec(self.dim, complement[i]);
        let project = |v: &[u64]| -> Vec<u64> {
            let r = ideal.reduce(self.p, v);
            complement.iter().map(|&c| r[c]).collect()
        };
        let mult = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| project(&self.mul(&lift(i), &lift(j))))
                    .collect()
            })
            .collect();
        let alg = FpAlgebra::new(self.p, mult, project(&self.unit));
        Quotient {
            alg,
            ideal: ideal.clone(),
            complement,
        }
    }

    /// Minimal polynomial of an element (monic, constant first).
    pub fn min_poly(&self, a: &[u64]) -> FpPoly {
        let p = self.p;
        let mut powers = vec![self.one()];
        loop {
            let k = powers.len();
            let m = Matrix::from_fn(self.dim, k, |i, j| powers[j][i]);
            let ker = kernel(&PrimeField::new(p), &m);
            if let Some(v) = ker.first() {
                let f = PrimeField::new(p);
                let inv = f
                    .inv(&v[k - 1])
                    .expect("kernel vector has a nonzero top entry");
                return v.iter().map(|x| x * inv % p).collect();
            }
            powers.push(self.mul(powers.last().unwrap(), a));
        }
    }

    /// Primitive central idempotents of a semisimple algebra, sorted lexicographically.
    pub fn primitive_central_idempotents(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let z = self.center();
        // Frobenius is additive on the (reduced, commutative) center; its fixed points are the
        // 𝔽_p-span of the primitive idempotents.
        let rows: Vec<Vec<u64>> = z
            .rows
            .iter()
            .map(|v| self.sub(&self.pow(v, p as u128), v))
            .collect();
        let m = Matrix::from_fn(self.dim, rows.len(), |i, j| rows[j][i]);
        let ker = kernel(&PrimeField::new(p), &m);
        let fixed: Vec<Vec<u64>> = ker.iter().map(|c| z.combine(p, c)).collect();
        let mut idems = vec![self.one()];
        for b in &fixed {
            if idems.len() == fixed.len() {
                break;
            }
            let roots: Vec<u64> = factor_mod_p(p, &self.min_poly(b))
                .into_iter()
                .filter(|(g, _)| g.len() == 2)
                .map(|(g, _)| (p - g[0]) % p)
                .collect();
            let mut next = Vec::new();
            for e in &idems {
                for &lam in &roots {
                    let shifted = self.sub(b, &self.scale(lam, &self.one()));
                    let ind = self.sub(&self.one(), &self.pow(&shifted, (p - 1) as u128));
                    let q = self.mul(e, &ind);
                    if !FpAlgebra::is_zero(&q) {
                        next.push(q);
                    }
                }
            }
            idems = next;
        }
        idems.sort();
        idems
    }
}

/// A quotient algebra A/I with the complement of the pivot columns of I as basis.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub alg: FpAlgebra,
    pub ideal: Subspace,
    complement: Vec<usize>,
}

impl Quotient {
    pub fn project(&self, v: &[u64]) -> Vec<u64> {
        let r = self.ideal.reduce(self.alg.p, v);
        self.complement.iter().map(|&c| r[c]).collect()
    }

    pub fn lift(&self, q: &[u64]) -> Vec<u64> {
        let mut v = vec![0; self.ideal.ambient];
        for (&c, &x) in self.complement.iter().zip(q) {
            v[c] = x;
        }
        v
    }

    /// Preimage in A of a subspace of the quotient.
    pub fn preimage(&self, s: &Subspace) -> Subspace {
        let lifted: Vec<Vec<u64>> = s.rows.iter().map(|r| self.lift(r)).collect();
        self.ideal.sum(
            self.alg.p,
            &Subspace::span(self.alg.p, &lifted, self.ideal.ambient),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix_algebra(p: u64, n: usize) -> FpAlgebra {
        let d = n * n;
        let mut mult = vec![vec![vec![0; d]; d]; d];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    mult[a * n + b][b * n + c][a * n + c] = 1;
                }
            }
        }
        let unit = (0..d).map(|i| u64::from(i / n == i % n)).collect();
        FpAlgebra::new(p, mult, unit)
    }

    fn upper_triangular(p: u64) -> FpAlgebra {
        // Basis E11, E12, E22.
        let mut mult = vec![vec![vec![0; 3]; 3]; 3];
        mult[0][0][0] = 1;
        mult[0][1][1] = 1;
        mult[1][2][1] = 1;
        mult[2][2][2] = 1;
        FpAlgebra::new(p, mult, vec![1, 0, 1])
    }

    fn truncated_poly(p: u64, f: &[u64]) -> FpAlgebra {
        let d = f.len() - 1;
        let mut mult = vec![vec![vec![0; d]; d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut x = vec![0u64; i + j + 1];
                x[i + j] = 1;
                let r = crate::exact::factor::fp_rem(p, &x, &f.to_vec());
                for (k, c) in r.iter().enumerate() {
                    mult[i][j][k] = *c;
                }
            }
        }
        FpAlgebra::new(p, mult, unit_vec(d, 0))
    }

    /// x is in the radical iff x·y is nilpotent for every y (checked over the whole algebra).
    fn radical_by_brute_force(a: &FpAlgebra) -> Subspace {
        let n = a.dim();
        let all: Vec<Vec<u64>> = (0..a.p.pow(n as u32))
            .map(|mut k| {
                (0..n)
                    .map(|_| {
                        let d = k % a.p;
                        k /= a.p;
                        d
                    })
                    .collect()
            })
            .collect();
        let nilpotent = |z: &[u64]| FpAlgebra::is_zero(&a.pow(z, n as u128 + 1));
        let members: Vec<Vec<u64>> = all
            .iter()
            .filter(|x| all.iter().all(|y| nilpotent(&a.mul(x, y))))
            .cloned()
            .collect();
        Subspace::span(a.p, &members, n)
    }

    #[test]
    fn radicals_match_brute_force() {
        let cases = vec![
            matrix_algebra(2, 2),
            upper_triangular(2),
            upper_triangular(3),
            truncated_poly(2, &[0, 0, 1]),
            truncated_poly(2, &[0, 1, 1]),
            truncated_poly(2, &[1, 0, 0, 1]),
            truncated_poly(3, &[0, 0, 0, 1]),
            truncated_poly(2, &[1, 0, 1, 0, 1]),
        ];
        for a in cases {
            assert_eq!(a.radical(), radical_by_brute_force(&a), "{a:?}");
        }
    }

    #[test]
    fn idempotents_of_split_and_field_algebras() {
        let a = truncated_poly(5, &[0, 4, 1]); // x² − x = x(x−1)
        let e = a.primitive_central_idempotents();
        assert_eq!(e, vec![vec![0, 1], vec![1, 4]]);
        let f = truncated_poly(2, &[1, 1, 1]); // 𝔽_4
        assert_eq!(f.primitive_central_idempotents(), vec![vec![1, 0]]);
        let m = matrix_algebra(3, 2);
        assert_eq!(m.primitive_central_idempotents(), vec![m.one()]);
    }

    #[test]
    fn quotient_by_radical_is_semisimple() {
        let u = upper_triangular(3);
        let j = u.radical();
        let q = u.quotient(&j);
        assert_eq!(q.alg.dim(), 2);
        assert_eq!(q.alg.radical().dim(), 0);
        let idems = q.alg.primitive_central_idempotents();
        assert_eq!(idems.len(), 2);
        for e in &idems {
            assert_eq!(q.alg.mul(e, e), *e);
            let lifted = q.lift(e);
            assert_eq!(q.project(&lifted), *e);
        }
    }
}
