//! Real root isolation over ℚ by Sturm sequences.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::QPoly;
use super::rational::{rat, sign_of, BigRat};

/// A real root of a square-free polynomial, isolated in the half-open interval `(lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoot {
    pub poly: QPoly,
    pub lo: BigRat,
    pub hi: BigRat,
}

impl RealRoot {
    /// Halves the isolating interval.
    pub fn refine(&mut self) {
        if self.lo == self.hi {
            return;
        }
        let mid = (&self.lo + &self.hi) / rat(2);
        let fm = self.poly.eval(&mid);
        if fm.is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        let fh = self.poly.eval(&self.hi);
        if fh.is_zero() || sign_of(&fm) != sign_of(&fh) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn refine_to(&mut self, width: &BigRat) {
        while &(&self.hi - &self.lo) > width {
            self.refine();
        }
    }

    pub fn approx(&self) -> f64 {
        super::rational::rat_to_f64(&((&self.lo + &self.hi) / rat(2)))
    }

    pub fn width(&self) -> BigRat {
        &self.hi - &self.lo
    }
}

pub fn sturm_sequence(f: &QPoly) -> Vec<QPoly> {
    let mut seq = vec![f.clone(), f.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        seq.push(r);
    }
    seq.retain(|p| !p.is_zero());
    seq
}

fn sign_changes(seq: &[QPoly], x: &BigRat) -> usize {
    let signs: Vec<i32> = seq
        .iter()
        .map(|p| sign_of(&p.eval(x)))
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Cauchy bound: every root has absolute value below it.
pub fn root_bound(f: &QPoly) -> BigRat {
    let l = f.lead().abs();
    let m = f
        .coeffs()
        .iter()
        .map(|c| c.abs() / &l)
        .max()
        .unwrap_or_else(BigRat::zero);
    m + BigRat::one()
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_roots(seq: &[QPoly], a: &BigRat, b: &BigRat) -> usize {
    sign_changes(seq, a) - sign_changes(seq, b)
}

/// Isolates all real roots of the square-free part of `f`, in increasing order.
pub fn real_roots(f: &QPoly) -> Vec<RealRoot> {
    let g = f.squarefree_part();
    if g.deg() == 0 {
        return vec![];
    }
    let seq = sturm_sequence(&g);
    let b = root_bound(&g);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_roots(&seq, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(RealRoot {
                poly: g.clone(),
                lo,
                hi,
            });
            continue;
        }
        let mid = (&lo + &hi) / rat(2);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Sign of `h(α)` for a real root α, refining until certain.
pub fn sign_at_root(h: &QPoly, root: &mut RealRoot) -> i32 {
    let r = h.rem(&root.poly);
    if r.is_zero() {
        return 0;
    }
    let g = r.gcd(&root.poly);
    if g.deg() > 0 && count_roots(&sturm_sequence(&g), &root.lo, &root.hi) > 0 {
        // α is the only root of root.poly in the interval, so it is a root of g.
        return 0;
    }
    let rseq = sturm_sequence(&r.squarefree_part());
    loop {
        if root.lo == root.hi {
            return sign_of(&r.eval(&root.lo));
        }
        if count_roots(&rseq, &root.lo, &root.hi) == 0 && sign_of(&r.eval(&root.hi)) != 0 {
            return sign_of(&r.eval(&root.hi));
        }
        root.refine();
    }
}

/// Dyadic rational closest to `x` with denominator `2^bits`.
pub fn dyadic(x: f64, bits: u32) -> BigRat {
    let scale = 2f64.powi(bits as i32);
    BigRat::new(
        BigInt::from((x * scale).round() as i64),
        BigInt::one() << bits,
    )
}
