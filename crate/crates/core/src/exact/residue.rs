//! Residue rings ℤ/ℓᴺ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::rational::{is_prime_u64, modinv, rat_mod, BigRat};

/// The ring ℤ/ℓᴺ for a prime ℓ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueRing {
    pub ell: u64,
    pub n: u32,
    modulus: BigInt,
}

/// An element of ℤ/ℓᴺ with canonical representative in `[0, ℓᴺ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueInt {
    pub value: BigInt,
    pub ell: u64,
    pub n: u32,
}

impl ResidueRing {
    pub fn new(ell: u64, n: u32) -> Result<Self> {
        if !is_prime_u64(ell) || n == 0 {
            return Err(Error::InvalidInput(format!(
                "need a prime ell and N >= 1, got ell={ell}, N={n}"
            )));
        }
        Ok(ResidueRing {
            ell,
            n,
            modulus: num_traits::pow(BigInt::from(ell), n as usize),
        })
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn elem(&self, v: &BigInt) -> ResidueInt {
        ResidueInt {
            value: v.mod_floor(&self.modulus),
            ell: self.ell,
            n: self.n,
        }
    }

    /// Image of an ℓ-integral rational; `None` if the denominator is divisible by ℓ.
    pub fn from_rat(&self, r: &BigRat) -> Option<ResidueInt> {
        rat_mod(r, &self.modulus).map(|v| ResidueInt {
            value: v,
            ell: self.ell,
            n: self.n,
        })
    }

    pub fn add(&self, a: &ResidueInt, b: &ResidueInt) -> ResidueInt {
        self.elem(&(&a.value + &b.value))
    }

    pub fn sub(&self, a: &ResidueInt, b: &ResidueInt) -> ResidueInt {
        self.elem(&(&a.value - &b.value))
    }

    pub fn mul(&self, a: &ResidueInt, b: &ResidueInt) -> ResidueInt {
        self.elem(&(&a.value * &b.value))
    }

    pub fn inv(&self, a: &ResidueInt) -> Option<ResidueInt> {
        modinv(&a.value, &self.modulus).map(|v| self.elem(&v))
    }

    pub fn zero(&self) -> ResidueInt {
        self.elem(&BigInt::zero())
    }

    pub fn one(&self) -> ResidueInt {
        self.elem(&BigInt::one())
    }
}

impl ResidueInt {
    /// Representative in `(−ℓᴺ/2, ℓᴺ/2]`.
    pub fn symmetric(&self) -> BigInt {
        let m = num_traits::pow(BigInt::from(self.ell), self.n as usize);
        if &self.value * 2 > m {
            &self.value - m
        } else {
            self.value.clone()
        }
    }
}
