//! Full-rank ℤ_(ℓ)-lattices in ℚ^n with a canonical form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::exact::intmat::hnf_basis;
use crate::exact::matrix::{inverse, vec_mat, Matrix};
use crate::exact::rational::{int_valuation, is_ell_integral, prime_to_part, rat_mod, BigRat};
use crate::exact::Rationals;

/// L = ℓ^{-shift}·L' where L' ⊆ ℤ^n has ℓ-power index and L' ⊄ ℓℤ^n; L' is stored by its
/// Hermite normal form, which makes equality structural.
#[derive(Clone, Debug)]
pub struct LocalLattice {
    pub ell: u64,
    shift: i64,
    hnf: Matrix<BigInt>,
    basis: Vec<Vec<BigRat>>,
    inv: Matrix<BigRat>,
}

impl PartialEq for LocalLattice {
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell && self.shift == other.shift && self.hnf == other.hnf
    }
}

impl Eq for LocalLattice {}

impl LocalLattice {
    /// The ℤ_(ℓ)-span of `rows`, which must have full rank n.
    pub fn from_rows(ell: u64, rows: &[Vec<BigRat>], n: usize) -> Result<LocalLattice> {
        let l = BigInt::from(ell);
        // Scale each row by a unit so that only ℓ-power denominators remain.
        let mut scaled = Vec::with_capacity(rows.len());
        let mut b: i64 = 0;
        for r in rows {
            let den = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let unit = BigRat::from_integer(prime_to_part(&den, ell));
            let v: Vec<BigRat> = r.iter().map(|x| x * &unit).collect();
            for x in &v {
                b = b.max(int_valuation(x.denom(), ell) as i64);
            }
            scaled.push(v);
        }
        let lb = BigRat::from_integer(Pow::pow(&l, b as u64));
        let ints: Vec<Vec<BigInt>> = scaled
            .iter()
            .map(|v| v.iter().map(|x| (x * &lb).to_integer()).collect())
            .collect();
        let first = hnf_basis(&Matrix::from_rows(ints, n));
        if first.rows() != n {
            return Err(Error::InvalidInput(format!(
                "lattice generators have rank {} < {n}",
                first.rows()
            )));
        }
        let det = (0..n).fold(BigInt::one(), |acc, i| acc * first.get(i, i));
        let k = int_valuation(&det, ell);
        let lk = Pow::pow(&l, k as u64);
        let mut all = first.to_rows();
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = lk.clone();
            all.push(e);
        }
        let mut hnf = hnf_basis(&Matrix::from_rows(all, n));
        // Pull out common factors of ℓ.
        let g = hnf
            .entries()
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| int_valuation(x, ell))
            .min()
            .unwrap_or(0);
        if g > 0 {
            let lg = Pow::pow(&l, g as u64);
            hnf = hnf.map(|x| x / &lg);
            b -= g as i64;
        }
        Ok(LocalLattice::from_canonical(ell, b, hnf))
    }

    fn from_canonical(ell: u64, shift: i64, hnf: Matrix<BigInt>) -> LocalLattice {
        let n = hnf.rows();
        let l = BigRat::from_integer(BigInt::from(ell));
        let scale = if shift >= 0 {
            BigRat::one() / Pow::pow(&l, shift as u64)
        } else {
            Pow::pow(&l, (-shift) as u64)
        };
        let basis: Vec<Vec<BigRat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRat::from_integer(hnf.get(i, j).clone()) * &scale)
                    .collect()
            })
            .collect();
        let inv = inverse(&Rationals, &Matrix::from_rows(basis.clone(), n)).expect("full rank");
        LocalLattice {
            ell,
            shift,
            hnf,
            basis,
            inv,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigRat>] {
        &self.basis
    }

    /// Coordinates of `v` in the basis (row convention: v = Σ c_i b_i).
    pub fn coords(&self, v: &[BigRat]) -> Vec<BigRat> {
        vec_mat(&Rationals, v, &self.inv)
    }

    pub fn contains(&self, v: &[BigRat]) -> bool {
        self.coords(v).iter().all(|c| is_ell_integral(c, self.ell))
    }

    pub fn contains_lattice(&self, other: &LocalLattice) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates reduced mod ℓ; `None` when `v` is not in the lattice.
    pub fn coords_mod(&self, v: &[BigRat], modulus: &BigInt) -> Option<Vec<BigInt>> {
        self.coords(v).iter().map(|c| rat_mod(c, modulus)).collect()
    }

    /// ℓ-adic valuation of the covolume relative to ℤ_(ℓ)^n.
    pub fn det_valuation(&self) -> i64 {
        let n = self.dim() as i64;
        let piv: i64 = (0..self.dim())
            .map(|i| int_valuation(self.hnf.get(i, i), self.ell) as i64)
            .sum();
        piv - n * self.shift
    }

    /// Σ c_i b_i for integer coordinates.
    pub fn combine(&self, c: &[BigInt]) -> Vec<BigRat> {
        let n = self.dim();
        let mut v = vec![BigRat::zero(); n];
        for (ci, b) in c.iter().zip(&self.basis) {
            if ci.is_zero() {
                continue;
            }
            let ci = BigRat::from_integer(ci.clone());
            for (x, y) in v.iter_mut().zip(b) {
                *x += &ci * y;
            }
        }
        v
    }

    pub fn scaled(&self, by_ell_power: i64) -> LocalLattice {
        LocalLattice::from_canonical(self.ell, self.shift - by_ell_power, self.hnf.clone())
    }

    pub fn hnf(&self) -> &Matrix<BigInt> {
        &self.hnf
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }
}

pub fn ell_pow(ell: u64, e: u32) -> BigInt {
    Pow::pow(&BigInt::from(ell), e)
}

pub fn mod_floor(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}
