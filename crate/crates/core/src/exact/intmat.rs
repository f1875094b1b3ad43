//! Integer normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;

pub type IntMatrix = Matrix<BigInt>;

pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    let c = rows.first().map_or(0, |r| r.len());
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
        c,
    )
}

fn int_identity(n: usize) -> IntMatrix {
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    })
}

fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let v = m.get(dst, j) - q * m.get(src, j);
        m.set(dst, j, v);
    }
}

fn row_negate(m: &mut IntMatrix, r: usize) {
    for j in 0..m.cols() {
        let v = -m.get(r, j).clone();
        m.set(r, j, v);
    }
}

/// Row-style Hermite normal form: returns `(h, u)` with `h = u·m`, `u` unimodular,
/// `h` upper triangular with positive pivots, entries above each pivot in `[0, pivot)`,
/// and zero rows at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = m.shape();
    let mut h = m.clone();
    let mut u = int_identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by(|&a, &b| h.get(a, c).abs().cmp(&h.get(b, c).abs()));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = h.get(i, c).div_floor(h.get(r, c));
                row_axpy(&mut h, i, r, &q);
                row_axpy(&mut u, i, r, &q);
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            row_negate(&mut h, r);
            row_negate(&mut u, r);
        }
        let piv = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&piv);
            row_axpy(&mut h, i, r, &q);
            row_axpy(&mut u, i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Nonzero rows of the Hermite normal form.
pub fn hnf_basis(m: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(m);
    let rows: Vec<Vec<BigInt>> = h
        .to_rows()
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    Matrix::from_rows(rows, m.cols())
}

/// Smith normal form diagonal `d₁ | d₂ | …`, of length min(rows, cols).
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let k = rows.min(cols);
    for t in 0..k {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let v = a.get(i, j);
                    if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_divisors(&a, k);
            };
            a.swap_rows(t, pi);
            if pj != t {
                for i in 0..rows {
                    let x = a.get(i, t).clone();
                    let y = a.get(i, pj).clone();
                    a.set(i, t, y);
                    a.set(i, pj, x);
                }
            }
            let mut clean = true;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                row_axpy(&mut a, i, t, &q);
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                for i in 0..rows {
                    let v = a.get(i, j) - &q * a.get(i, t);
                    a.set(i, j, v);
                }
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let piv = a.get(t, t).clone();
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(a.get(i, j) % &piv).is_zero()));
            match bad {
                Some(i) => row_axpy(&mut a, t, i, &BigInt::from(-1)),
                None => break,
            }
        }
    }
    finish_divisors(&a, k)
}

fn finish_divisors(a: &IntMatrix, k: usize) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = (0..k).map(|i| a.get(i, i).abs()).collect();
    // Restore the divisibility chain (zeros last).
    for i in 0..k {
        for j in i + 1..k {
            let (x, y) = (d[i].clone(), d[j].clone());
            if x.is_zero() && !y.is_zero() {
                d.swap(i, j);
                continue;
            }
            if y.is_zero() {
                continue;
            }
            let g = x.gcd(&y);
            d[i] = g.clone();
            d[j] = x.lcm(&y);
        }
    }
    d
}

/// Index of the row lattice of `sub` inside `ℤ^n`, or `None` if not of full rank.
pub fn lattice_index(sub: &IntMatrix) -> Option<BigInt> {
    let d = smith_normal_form(sub);
    if d.len() < sub.cols() || d.iter().any(|x| x.is_zero()) {
        return None;
    }
    Some(d.iter().product())
}
