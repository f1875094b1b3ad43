//! Polynomials over 𝔽_p and factorization over 𝔽_p and ℚ.
//!
//! Polynomials over 𝔽_p are plain coefficient vectors (constant first) with entries in `[0, p)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::PrimeField;
use super::matrix::{kernel, Matrix};
use super::poly::QPoly;
use super::rational::{is_prime_u64, rat_int, BigRat};

pub type FpPoly = Vec<u64>;

pub fn fp_trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn fp_deg(a: &FpPoly) -> usize {
    a.len().saturating_sub(1)
}

pub fn fp_add(p: u64, a: &FpPoly, b: &FpPoly) -> FpPoly {
    let n = a.len().max(b.len());
    fp_trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn fp_sub(p: u64, a: &FpPoly, b: &FpPoly) -> FpPoly {
    let n = a.len().max(b.len());
    fp_trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn fp_scale(p: u64, a: &FpPoly, s: u64) -> FpPoly {
    fp_trim(a.iter().map(|&c| c * (s % p) % p).collect())
}

pub fn fp_mul(p: u64, a: &FpPoly, b: &FpPoly) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

pub fn fp_divrem(p: u64, a: &FpPoly, d: &FpPoly) -> (FpPoly, FpPoly) {
    let f = PrimeField::new(p);
    assert!(!d.is_empty(), "division by zero polynomial");
    let dd = d.len() - 1;
    let inv = f.pow(*d.last().unwrap(), p - 2);
    let mut r = a.clone();
    if r.len() < d.len() {
        return (vec![], fp_trim(r));
    }
    let mut q = vec![0u64; r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd] * inv % p;
        if c != 0 {
            for (j, &dc) in d.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * dc % p) % p;
            }
        }
        q[k] = c;
    }
    r.truncate(dd);
    (fp_trim(q), fp_trim(r))
}

pub fn fp_rem(p: u64, a: &FpPoly, d: &FpPoly) -> FpPoly {
    fp_divrem(p, a, d).1
}

pub fn fp_monic(p: u64, a: &FpPoly) -> FpPoly {
    match a.last() {
        None => vec![],
        Some(&l) => fp_scale(p, a, PrimeField::new(p).pow(l, p - 2)),
    }
}

pub fn fp_gcd(p: u64, a: &FpPoly, b: &FpPoly) -> FpPoly {
    let (mut x, mut y) = (fp_trim(a.clone()), fp_trim(b.clone()));
    while !y.is_empty() {
        let r = fp_rem(p, &x, &y);
        x = y;
        y = r;
    }
    fp_monic(p, &x)
}

/// Extended gcd: returns `(g, s, t)` with `s·a + t·b = g` monic.
pub fn fp_xgcd(p: u64, a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (fp_trim(a.clone()), fp_trim(b.clone()));
    let (mut s0, mut s1) = (vec![1u64], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(p, &r0, &r1);
        let s2 = fp_sub(p, &s0, &fp_mul(p, &q, &s1));
        let t2 = fp_sub(p, &t0, &fp_mul(p, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let inv = match r0.last() {
        Some(&l) => PrimeField::new(p).pow(l, p - 2),
        None => 1,
    };
    (
        fp_scale(p, &r0, inv),
        fp_scale(p, &s0, inv),
        fp_scale(p, &t0, inv),
    )
}

pub fn fp_derivative(p: u64, a: &FpPoly) -> FpPoly {
    fp_trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % p) * c % p)
            .collect(),
    )
}

/// `base^e mod m`.
pub fn fp_powmod(p: u64, base: &FpPoly, mut e: u128, m: &FpPoly) -> FpPoly {
    let mut r = fp_rem(p, &vec![1], m);
    let mut b = fp_rem(p, base, m);
    while e > 0 {
        if e & 1 == 1 {
            r = fp_rem(p, &fp_mul(p, &r, &b), m);
        }
        b = fp_rem(p, &fp_mul(p, &b, &b), m);
        e >>= 1;
    }
    r
}

/// Reduction of a ℚ-polynomial with p-integral coefficients; `None` otherwise.
pub fn reduce_qpoly(p: u64, f: &QPoly) -> Option<FpPoly> {
    let pb = BigInt::from(p);
    let mut out = Vec::with_capacity(f.coeffs().len());
    for c in f.coeffs() {
        let inv = super::rational::modinv(c.denom(), &pb)?;
        out.push((c.numer() * inv).mod_floor(&pb).to_u64().unwrap());
    }
    Some(fp_trim(out))
}

/// Irreducible factors of a monic square-free polynomial over 𝔽_p (Berlekamp).
pub fn berlekamp(p: u64, f: &FpPoly) -> Vec<FpPoly> {
    let f = fp_monic(p, f);
    let n = fp_deg(&f);
    if n <= 1 {
        return vec![f];
    }
    let field = PrimeField::new(p);
    // Rows: x^{p·i} mod f; the fixed space of Frobenius is ker(Q − I) acting on row vectors.
    let xp = fp_powmod(p, &vec![0, 1], p as u128, &f);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut cur = vec![1u64];
    for _ in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        rows.push(row);
        cur = fp_rem(p, &fp_mul(p, &cur, &xp), &f);
    }
    let qmi = Matrix::from_fn(n, n, |i, j| (rows[j][i] + p - u64::from(i == j)) % p);
    let basis = kernel(&field, &qmi);
    let k = basis.len();
    let mut factors = vec![f.clone()];
    if k == 1 {
        return factors;
    }
    for v in basis.iter() {
        if factors.len() == k {
            break;
        }
        let v = fp_trim(v.clone());
        if fp_deg(&v) == 0 {
            continue;
        }
        let mut next = Vec::new();
        for u in factors {
            if fp_deg(&u) <= 1 {
                next.push(u);
                continue;
            }
            // The gcds with v − s over s ∈ 𝔽_p partition u.
            let mut rest = u;
            for s in 0..p {
                if fp_deg(&rest) == 0 {
                    break;
                }
                let g = fp_gcd(p, &fp_sub(p, &v, &vec![s]), &rest);
                if fp_deg(&g) > 0 {
                    rest = fp_divrem(p, &rest, &g).0;
                    next.push(g);
                }
            }
        }
        factors = next;
    }
    factors.sort();
    factors
}

/// Full factorization over 𝔽_p: monic irreducible factors with multiplicities, sorted.
pub fn factor_mod_p(p: u64, f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let f = fp_monic(p, f);
    let mut out: Vec<(FpPoly, u32)> = Vec::new();
    squarefree_fp(p, &f, 1, &mut out);
    let mut res: Vec<(FpPoly, u32)> = Vec::new();
    for (g, e) in out {
        for h in berlekamp(p, &g) {
            if let Some(x) = res.iter_mut().find(|(q, _)| *q == h) {
                x.1 += e;
            } else {
                res.push((h, e));
            }
        }
    }
    res.sort();
    res
}

fn squarefree_fp(p: u64, f: &FpPoly, mult: u32, out: &mut Vec<(FpPoly, u32)>) {
    if fp_deg(f) == 0 {
        return;
    }
    let d = fp_derivative(p, f);
    if d.is_empty() {
        // f = g(x^p); over 𝔽_p the p-th root just takes every p-th coefficient.
        let g: FpPoly = f.iter().step_by(p as usize).copied().collect();
        squarefree_fp(p, &g, mult * p as u32, out);
        return;
    }
    let c = fp_gcd(p, f, &d);
    let mut w = fp_divrem(p, f, &c).0;
    let mut c = c;
    let mut i = 1;
    while fp_deg(&w) > 0 {
        let y = fp_gcd(p, &w, &c);
        let z = fp_divrem(p, &w, &y).0;
        if fp_deg(&z) > 0 {
            out.push((fp_monic(p, &z), i * mult));
        }
        i += 1;
        w = y;
        c = fp_divrem(p, &c, &w).0;
    }
    if fp_deg(&c) > 0 {
        let g: FpPoly = c.iter().step_by(p as usize).copied().collect();
        squarefree_fp(p, &g, mult * p as u32, out);
    }
}

type ZPoly = Vec<BigInt>;

fn z_trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn z_mul(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    z_trim(out.into_iter().map(|c| c.mod_floor(m)).collect())
}

fn z_from_fp(a: &FpPoly) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn z_to_fp(a: &ZPoly, p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    fp_trim(
        a.iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

/// Lifts `f ≡ g·h (mod p)` (g, h monic and coprime mod p) to a factorization modulo `p^k`.
fn hensel_pair(f: &ZPoly, g: &FpPoly, h: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (one, a, b) = fp_xgcd(p, g, h);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut gz = z_from_fp(g);
    let mut hz = z_from_fp(h);
    let mut pk = pb.clone();
    for _ in 1..k {
        let next = &pk * &pb;
        let prod = z_mul(&gz, &hz, &next);
        let n = f.len().max(prod.len());
        let diff: ZPoly = (0..n)
            .map(|i| {
                let x = f.get(i).cloned().unwrap_or_default()
                    - prod.get(i).cloned().unwrap_or_default();
                x.mod_floor(&next) / &pk
            })
            .collect();
        let e = z_to_fp(&diff, p);
        if !e.is_empty() {
            let (q, r) = fp_divrem(p, &fp_mul(p, &e, &b), g);
            let hh = fp_add(p, &fp_mul(p, &e, &a), &fp_mul(p, &q, h));
            for (i, c) in r.iter().enumerate() {
                gz[i] = (&gz[i] + &pk * BigInt::from(*c)).mod_floor(&next);
            }
            for (i, c) in hh.iter().enumerate() {
                hz[i] = (&hz[i] + &pk * BigInt::from(*c)).mod_floor(&next);
            }
        }
        pk = next;
    }
    (gz, hz)
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Irreducible factors over ℤ of a monic square-free integer polynomial.
fn factor_monic_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let fq = QPoly::from_bigints(f);
    let p = (3u64..)
        .filter(|&q| is_prime_u64(q))
        .find(|&q| {
            let fp = z_to_fp(f, q);
            fp_deg(&fp) == n && fp_deg(&fp_gcd(q, &fp, &fp_derivative(q, &fp))) == 0
        })
        .expect("some prime keeps the polynomial square-free");
    let modp = berlekamp(p, &z_to_fp(f, p));
    if modp.len() == 1 {
        return vec![f.clone()];
    }
    // Mignotte-style bound on factor coefficients.
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << (n + 1)) * (norm2.sqrt() + 1);
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk <= &bound * 2 {
        pk *= p;
        k += 1;
    }
    // Lift one factor at a time against the product of the rest.
    let mut lifted: Vec<ZPoly> = Vec::new();
    let mut rest_z = f.iter().map(|c| c.mod_floor(&pk)).collect::<ZPoly>();
    for i in 0..modp.len() - 1 {
        let g = &modp[i];
        let h = modp[i + 1..]
            .iter()
            .fold(vec![1u64], |acc, x| fp_mul(p, &acc, x));
        let (gz, hz) = hensel_pair(&rest_z, g, &h, p, k);
        lifted.push(gz);
        rest_z = hz;
    }
    lifted.push(rest_z);

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut target = fq.clone();
    let mut found: Vec<ZPoly> = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut hit = None;
        for combo in combinations(remaining.len(), size) {
            let prod = combo.iter().fold(vec![BigInt::one()], |acc, &i| {
                z_mul(&acc, &lifted[remaining[i]], &pk)
            });
            let cand: ZPoly = prod.iter().map(|c| symmetric(c, &pk)).collect();
            let cq = QPoly::from_bigints(&cand);
            let (q, r) = target.divrem(&cq);
            if r.is_zero() && q.coeffs().iter().all(|c| c.is_integer()) {
                hit = Some((combo, cand, q));
                break;
            }
        }
        match hit {
            Some((combo, cand, q)) => {
                found.push(cand);
                target = q;
                let drop: Vec<usize> = combo.iter().map(|&i| remaining[i]).collect();
                remaining.retain(|x| !drop.contains(x));
            }
            None => size += 1,
        }
    }
    let last: ZPoly = target.coeffs().iter().map(|c| c.to_integer()).collect();
    if last.len() > 1 {
        found.push(last);
    }
    found
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Square-free decomposition over ℚ: monic factors `g_i` with `f = c·Π g_i^i`.
pub fn squarefree_decomposition(f: &QPoly) -> Vec<(QPoly, u32)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let f = f.monic();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.divrem(&c).0;
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let z = w.divrem(&y).0;
        if z.deg() > 0 {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.divrem(&w).0;
    }
    out
}

/// Factorization over ℚ into monic irreducible factors with multiplicities.
pub fn factor_rational(f: &QPoly) -> Vec<(QPoly, u32)> {
    let mut out = Vec::new();
    for (g, e) in squarefree_decomposition(f) {
        for h in factor_squarefree_rational(&g) {
            out.push((h, e));
        }
    }
    out.sort_by(|a, b| {
        a.0.deg()
            .cmp(&b.0.deg())
            .then_with(|| a.0.to_strings().cmp(&b.0.to_strings()))
    });
    out
}

/// Irreducible monic factors over ℚ of a square-free polynomial.
pub fn factor_squarefree_rational(f: &QPoly) -> Vec<QPoly> {
    if f.deg() <= 1 {
        return vec![f.monic()];
    }
    let prim = f.primitive_integer();
    let n = prim.len() - 1;
    let lc = prim[n].clone();
    // F(x) = lc^{n-1} f(x / lc) is monic with integer coefficients.
    let monic: ZPoly = (0..=n)
        .map(|i| {
            if i == n {
                BigInt::one()
            } else {
                &prim[i] * num_traits::pow(lc.clone(), n - 1 - i)
            }
        })
        .collect();
    factor_monic_squarefree(&monic)
        .into_iter()
        .map(|g| {
            // g(lc·x) recovers a factor of f up to a constant.
            let q: Vec<BigRat> = g
                .iter()
                .enumerate()
                .map(|(i, c)| rat_int(&(c * num_traits::pow(lc.clone(), i))))
                .collect();
            QPoly::new(q).monic()
        })
        .collect()
}

/// Rational roots of a polynomial over ℚ (sorted).
pub fn rational_roots(f: &QPoly) -> Vec<BigRat> {
    let mut r: Vec<BigRat> = factor_rational(f)
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| -g.coeff(0))
        .collect();
    r.sort();
    r
}

pub fn is_irreducible_rational(f: &QPoly) -> bool {
    f.deg() >= 1 && f.is_squarefree() && factor_squarefree_rational(f).len() == 1
}

pub fn fp_from_ints(p: u64, c: &[i64]) -> FpPoly {
    fp_trim(c.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
}

pub fn abs_max(f: &ZPoly) -> BigInt {
    f.iter().map(|c| c.abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prod(fs: &[(QPoly, u32)]) -> QPoly {
        fs.iter()
            .fold(QPoly::one(), |acc, (g, e)| acc.mul(&g.pow(*e)))
    }

    #[test]
    fn berlekamp_splits_x4_minus_1_mod_5() {
        let f = fp_from_ints(5, &[-1, 0, 0, 0, 1]);
        let fs = berlekamp(5, &f);
        assert_eq!(fs.len(), 4);
        assert!(fs.iter().all(|g| fp_deg(g) == 1));
    }

    #[test]
    fn x2_plus_1_over_small_primes() {
        let f = fp_from_ints(3, &[1, 0, 1]);
        assert_eq!(factor_mod_p(3, &f).len(), 1);
        let f = fp_from_ints(5, &[1, 0, 1]);
        assert_eq!(factor_mod_p(5, &f).len(), 2);
        let f = fp_from_ints(2, &[1, 0, 1]);
        assert_eq!(factor_mod_p(2, &f), vec![(vec![1, 1], 2)]);
    }

    #[test]
    fn rational_factorization() {
        let f = QPoly::from_ints(&[-1, 0, 0, 0, 1]);
        let fs = factor_rational(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(prod(&fs), f);
        // Swinnerton-Dyer style: x^4 - 10x^2 + 1 is irreducible but splits mod every prime.
        assert!(is_irreducible_rational(&QPoly::from_ints(&[
            1, 0, -10, 0, 1
        ])));
        let g = QPoly::from_ints(&[6, -5, 1])
            .mul(&QPoly::from_ints(&[1, 0, 3]))
            .scale(&super::super::rational::rat_frac(3, 2));
        let gs = factor_rational(&g);
        assert_eq!(prod(&gs), g.monic());
        assert_eq!(
            rational_roots(&g),
            vec![
                super::super::rational::rat(2),
                super::super::rational::rat(3)
            ]
        );
        let nonmonic = QPoly::from_ints(&[-1, 0, 4]).mul(&QPoly::from_ints(&[1, 1, 3]));
        assert_eq!(factor_rational(&nonmonic).len(), 3);
    }
}
