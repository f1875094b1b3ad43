//! Rational scalars and small integer helpers.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type BigRat = num_rational::BigRational;

pub fn rat(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: &BigInt) -> BigRat {
    BigRat::from_integer(n.clone())
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-1.25"`.
pub fn parse_rat(s: &str) -> Result<BigRat> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRat::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        let n: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = BigRat::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRat::from_integer(n))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn fmt_rat(r: &BigRat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact conversion of a finite `f64`.
pub fn rat_from_f64(x: f64) -> BigRat {
    BigRat::from_float(x).unwrap_or_else(BigRat::zero)
}

pub fn rat_to_f64(r: &BigRat) -> f64 {
    let (n, d) = (r.numer(), r.denom());
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b != 0.0 => a / b,
        _ => {
            let shift = (n.bits() as i64 - d.bits() as i64) - 60;
            let (nn, dd) = if shift > 0 {
                (n.clone(), d << (shift as usize))
            } else {
                (n << ((-shift) as usize), d.clone())
            };
            (nn / dd).to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
        }
    }
}

/// ℓ-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, ell: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let l = BigInt::from(ell);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&l);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// ℓ-adic valuation of a rational; `None` for zero.
pub fn rat_valuation(r: &BigRat, ell: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    Some(int_valuation(r.numer(), ell) as i64 - int_valuation(r.denom(), ell) as i64)
}

pub fn is_ell_integral(r: &BigRat, ell: u64) -> bool {
    rat_valuation(r, ell).is_none_or(|v| v >= 0)
}

/// Part of `n` coprime to ℓ.
pub fn prime_to_part(n: &BigInt, ell: u64) -> BigInt {
    let l = BigInt::from(ell);
    let mut m = n.abs();
    if m.is_zero() {
        return m;
    }
    loop {
        let (q, r) = m.div_rem(&l);
        if !r.is_zero() {
            return m;
        }
        m = q;
    }
}

pub fn modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Image of an ℓ-integral rational in ℤ/m where m is a power of ℓ.
pub fn rat_mod(r: &BigRat, m: &BigInt) -> Option<BigInt> {
    let inv = modinv(r.denom(), m)?;
    Some((r.numer() * inv).mod_floor(m))
}

pub fn rat_floor(r: &BigRat) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn rat_round(r: &BigRat) -> BigInt {
    rat_floor(&(r + BigRat::new(BigInt::one(), BigInt::from(2))))
}

pub fn lcm_denominators<'a>(it: impl IntoIterator<Item = &'a BigRat>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn sign_of(r: &BigRat) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factors (with multiplicity) of a nonzero integer by trial division and Pollard rho.
pub fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut m = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    if m.is_zero() {
        return out;
    }
    let push = |p: BigInt, out: &mut Vec<(BigInt, u32)>| {
        if let Some(e) = out.iter_mut().find(|(q, _)| *q == p) {
            e.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    let mut p = 2u64;
    while p < 100_000 {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        while (&m % &bp).is_zero() {
            m /= &bp;
            push(bp.clone(), &mut out);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        if let Some(xs) = x.to_u64() {
            if is_prime_u64(xs) {
                push(x, &mut out);
                continue;
            }
        } else if probably_prime_big(&x) {
            push(x, &mut out);
            continue;
        }
        let d = pollard_rho(&x);
        stack.push(&x / &d);
        stack.push(d);
    }
    out.sort();
    out
}

fn probably_prime_big(n: &BigInt) -> bool {
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'w: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'w;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut x, mut y, mut d) = (BigInt::from(2), BigInt::from(2), BigInt::one());
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1;
    }
}

pub fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}
