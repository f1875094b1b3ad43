//! Oracles shared by the integration tests.
#![allow(dead_code)]

/// n with its square factors removed.
pub fn squarefree_part(mut n: i64) -> i64 {
    let mut p = 2;
    while p * p <= n.abs() {
        while n % (p * p) == 0 {
            n /= p * p;
        }
        p += 1;
    }
    n
}

/// Hilbert symbol (a, b)_ℓ for a prime ℓ, by searching for a primitive solution of
/// a x² + b y² = z² modulo ℓ^k; after removing square factors |v_ℓ(a)|, |v_ℓ(b)| ≤ 1, so
/// k = 6 for ℓ = 2 and k = 3 otherwise is enough for Hensel lifting.
pub fn hilbert_symbol(a: i64, b: i64, ell: i64) -> i32 {
    let (a, b) = (squarefree_part(a), squarefree_part(b));
    let k = if ell == 2 { 6 } else { 3 };
    let m = ell.pow(k);
    let mut square = vec![false; m as usize];
    let mut unit_square = vec![false; m as usize];
    for z in 0..m {
        let s = (z * z % m) as usize;
        square[s] = true;
        if z % ell != 0 {
            unit_square[s] = true;
        }
    }
    for x in 0..m {
        for y in 0..m {
            let lhs = (a * x * x + b * y * y).rem_euclid(m) as usize;
            let primitive_xy = x % ell != 0 || y % ell != 0;
            if (primitive_xy && square[lhs]) || unit_square[lhs] {
                return 1;
            }
        }
    }
    -1
}

/// (a, b)_∞.
pub fn hilbert_symbol_real(a: i64, b: i64) -> i32 {
    if a < 0 && b < 0 {
        -1
    } else {
        1
    }
}
