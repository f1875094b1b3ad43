//! Dense matrices and field-generic linear algebra.

use serde::{Deserialize, Serialize};

use super::field::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, v: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    /// Builds from row vectors; `cols` is needed for the empty case.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<T> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
}

pub fn zeros<F: Field>(f: &F, r: usize, c: usize) -> Matrix<F::Elem> {
    Matrix::filled(r, c, f.zero())
}

pub fn mat_mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols(), b.rows(), "shape mismatch in product");
    let mut out = zeros(f, a.rows(), b.cols());
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            let aik = a.get(i, k);
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols() {
                let bkj = b.get(k, j);
                if f.is_zero(bkj) {
                    continue;
                }
                let v = f.add(out.get(i, j), &f.mul(aik, bkj));
                out.set(i, j, v);
            }
        }
    }
    out
}

pub fn mat_add<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.shape(), b.shape());
    Matrix::from_fn(a.rows(), a.cols(), |i, j| f.add(a.get(i, j), b.get(i, j)))
}

pub fn mat_sub<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.shape(), b.shape());
    Matrix::from_fn(a.rows(), a.cols(), |i, j| f.sub(a.get(i, j), b.get(i, j)))
}

pub fn mat_scale<F: Field>(f: &F, s: &F::Elem, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    a.map(|x| f.mul(s, x))
}

pub fn mat_vec<F: Field>(f: &F, a: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(a.cols(), v.len());
    (0..a.rows())
        .map(|i| {
            let mut s = f.zero();
            for (j, vj) in v.iter().enumerate() {
                if !f.is_zero(vj) {
                    s = f.add(&s, &f.mul(a.get(i, j), vj));
                }
            }
            s
        })
        .collect()
}

pub fn vec_mat<F: Field>(f: &F, v: &[F::Elem], a: &Matrix<F::Elem>) -> Vec<F::Elem> {
    assert_eq!(a.rows(), v.len());
    let mut out = vec![f.zero(); a.cols()];
    for (i, vi) in v.iter().enumerate() {
        if f.is_zero(vi) {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o = f.add(o, &f.mul(vi, a.get(i, j)));
        }
    }
    out
}

pub fn trace<F: Field>(f: &F, a: &Matrix<F::Elem>) -> F::Elem {
    (0..a.rows().min(a.cols())).fold(f.zero(), |s, i| f.add(&s, a.get(i, i)))
}

pub fn is_zero_matrix<F: Field>(f: &F, a: &Matrix<F::Elem>) -> bool {
    a.entries().iter().all(|x| f.is_zero(x))
}

/// Reduced row echelon form and pivot columns.
pub fn rref<F: Field>(f: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| !f.is_zero(a.get(i, c))) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = f.inv(a.get(r, c)).expect("nonzero pivot");
        for j in c..a.cols() {
            let v = f.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows() {
            if i == r || f.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in c..a.cols() {
                let v = f.sub(a.get(i, j), &f.mul(&factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    rref(f, m).1.len()
}

/// Basis of the right kernel {v : m v = 0}.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let (r, pivots) = rref(f, m);
    let n = m.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); n];
            v[fc] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, fc));
            }
            v
        })
        .collect()
}

/// Basis of the left kernel {v : v m = 0}.
pub fn left_kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    kernel(f, &m.transpose())
}

/// Nonzero rows of the reduced echelon form: a canonical basis of the row space.
pub fn row_space<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let (r, p) = rref(f, m);
    (0..p.len()).map(|i| r.row_vec(i)).collect()
}

/// Solves a x = b; returns one solution if consistent.
pub fn solve<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let aug = Matrix::from_fn(a.rows(), a.cols() + 1, |i, j| {
        if j < a.cols() {
            a.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let (r, pivots) = rref(f, &aug);
    if pivots.last() == Some(&a.cols()) {
        return None;
    }
    let mut x = vec![f.zero(); a.cols()];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r.get(row, a.cols()).clone();
    }
    Some(x)
}

/// Solves x a = b (x a row vector).
pub fn solve_left<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    solve(f, &a.transpose(), b)
}

pub fn inverse<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = a.rows();
    if n != a.cols() {
        return None;
    }
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            a.get(i, j).clone()
        } else if j - n == i {
            f.one()
        } else {
            f.zero()
        }
    });
    let (r, pivots) = rref(f, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| r.get(i, j + n).clone()))
}

pub fn determinant<F: Field>(f: &F, a: &Matrix<F::Elem>) -> F::Elem {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut m = a.clone();
    let mut det = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !f.is_zero(m.get(i, c))) else {
            return f.zero();
        };
        if p != c {
            m.swap_rows(p, c);
            det = f.neg(&det);
        }
        let piv = m.get(c, c).clone();
        det = f.mul(&det, &piv);
        let inv = f.inv(&piv).expect("nonzero pivot");
        for i in c + 1..n {
            if f.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = f.mul(m.get(i, c), &inv);
            for j in c..n {
                let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                m.set(i, j, v);
            }
        }
    }
    det
}

/// Intersection of two subspaces given by spanning row vectors.
pub fn intersect_spaces<F: Field>(
    f: &F,
    a: &[Vec<F::Elem>],
    b: &[Vec<F::Elem>],
    n: usize,
) -> Vec<Vec<F::Elem>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve Σ x_i a_i = Σ y_j b_j.
    let rows: Vec<Vec<F::Elem>> = a
        .iter()
        .cloned()
        .chain(b.iter().map(|v| v.iter().map(|x| f.neg(x)).collect()))
        .collect();
    let m = Matrix::from_rows(rows, n);
    let ker = left_kernel(f, &m);
    let vecs: Vec<Vec<F::Elem>> = ker
        .iter()
        .map(|k| {
            let mut v = vec![f.zero(); n];
            for (i, ai) in a.iter().enumerate() {
                if f.is_zero(&k[i]) {
                    continue;
                }
                for (t, x) in ai.iter().enumerate() {
                    v[t] = f.add(&v[t], &f.mul(&k[i], x));
                }
            }
            v
        })
        .collect();
    if vecs.is_empty() {
        return vecs;
    }
    row_space(f, &Matrix::from_rows(vecs, n))
}
