//! The finite Heisenberg group 𝒢(δ) with scalars in ℚ^× · μ_m.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::cyclo::CoeffField;
use crate::error::{Error, Result};
use crate::exact::rational::{fmt_rat, BigRat};

/// Elementary divisors d₁, …, d_g with d_{i+1} | d_i and 8 | d_i.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaType {
    d: Vec<u64>,
}

impl DeltaType {
    pub fn new(d: Vec<u64>) -> Result<DeltaType> {
        if d.is_empty() {
            return Err(Error::InvalidInput(
                "delta type needs at least one divisor".into(),
            ));
        }
        if let Some(bad) = d.iter().find(|&&x| x == 0 || x % 8 != 0) {
            return Err(Error::InvalidInput(format!(
                "divisor {bad} is not a positive multiple of 8"
            )));
        }
        if let Some(w) = d.windows(2).find(|w| w[0] % w[1] != 0) {
            return Err(Error::InvalidInput(format!(
                "{} does not divide {}",
                w[1], w[0]
            )));
        }
        Ok(DeltaType { d })
    }

    /// Parses "8" or "8,8".
    pub fn parse(s: &str) -> Result<DeltaType> {
        let d = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidInput(format!("bad divisor {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        DeltaType::new(d)
    }

    pub fn divisors(&self) -> &[u64] {
        &self.d
    }

    pub fn genus(&self) -> usize {
        self.d.len()
    }

    /// |δ| = Π dᵢ = dim V(δ).
    pub fn order(&self) -> usize {
        self.d.iter().product::<u64>() as usize
    }

    /// m = lcm(2dᵢ) = 2d₁; all scalars live in μ_m.
    pub fn root_order(&self) -> u64 {
        2 * self.d[0]
    }

    /// Exponent of ⟨a, ℓ⟩ = Π ζ_{dᵢ}^{aᵢℓᵢ} as a power of ζ_m.
    pub fn pairing(&self, a: &[u64], l: &[u64]) -> u64 {
        let m = self.root_order();
        a.iter()
            .zip(l)
            .zip(&self.d)
            .map(|((x, y), d)| (x * y % d) * (m / d))
            .sum::<u64>()
            % m
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<u64> {
        v.iter()
            .zip(&self.d)
            .map(|(x, d)| x.rem_euclid(*d as i64) as u64)
            .collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.d)
            .map(|((x, y), d)| (x + y) % d)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.d)
            .map(|(x, d)| (d - x % d) % d)
            .collect()
    }

    pub fn scale(&self, n: i64, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.d)
            .map(|(x, d)| ((*x as i64 * n.rem_euclid(*d as i64)) as u64) % d)
            .collect()
    }

    /// Mixed-radix index of a ∈ K(δ), last coordinate fastest.
    pub fn index(&self, a: &[u64]) -> usize {
        a.iter()
            .zip(&self.d)
            .fold(0usize, |acc, (x, d)| acc * *d as usize + (*x % d) as usize)
    }

    pub fn element(&self, mut idx: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.d.len()];
        for i in (0..self.d.len()).rev() {
            let d = self.d[i] as usize;
            v[i] = (idx % d) as u64;
            idx /= d;
        }
        v
    }

    /// All elements of K(δ) in index order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        (0..self.order()).map(|i| self.element(i)).collect()
    }

    pub fn unit_vector(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.d.len()];
        v[i] = 1;
        v
    }

    pub fn to_json(&self) -> Value {
        json!(self.d)
    }
}

/// A nonzero scalar c·ζ_m^k with c > 0 rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Unit {
    pub scale: BigRat,
    pub root: u64,
    pub m: u64,
}

impl Unit {
    pub fn one(m: u64) -> Unit {
        Unit {
            scale: BigRat::one(),
            root: 0,
            m,
        }
    }

    pub fn root(k: u64, m: u64) -> Unit {
        Unit {
            scale: BigRat::one(),
            root: k % m,
            m,
        }
    }

    /// c·ζ_m^k, with the sign of c absorbed into the root (m is even).
    pub fn new(c: BigRat, k: u64, m: u64) -> Result<Unit> {
        if c.is_zero() {
            return Err(Error::InvalidInput("scalar must be nonzero".into()));
        }
        let shift = if c.is_negative() { m / 2 } else { 0 };
        Ok(Unit {
            scale: c.abs(),
            root: (k + shift) % m,
            m,
        })
    }

    pub fn mul(&self, o: &Unit) -> Unit {
        Unit {
            scale: &self.scale * &o.scale,
            root: (self.root + o.root) % self.m,
            m: self.m,
        }
    }

    pub fn inv(&self) -> Unit {
        Unit {
            scale: self.scale.recip(),
            root: (self.m - self.root) % self.m,
            m: self.m,
        }
    }

    pub fn div(&self, o: &Unit) -> Unit {
        self.mul(&o.inv())
    }

    pub fn times_root(&self, k: u64) -> Unit {
        Unit {
            scale: self.scale.clone(),
            root: (self.root + k) % self.m,
            m: self.m,
        }
    }

    pub fn pow(&self, e: u64) -> Unit {
        let mut scale = BigRat::one();
        for _ in 0..e {
            scale *= &self.scale;
        }
        Unit {
            scale,
            root: ((self.root as u128 * e as u128) % self.m as u128) as u64,
            m: self.m,
        }
    }

    pub fn is_one(&self) -> bool {
        self.root == 0 && self.scale.is_one()
    }

    pub fn is_root_of_unity(&self) -> bool {
        self.scale.is_one()
    }

    pub fn to_field<F: CoeffField>(&self, f: &F) -> F::Elem {
        debug_assert_eq!(f.root_order() % self.m, 0);
        let r = f.root_of_unity(self.root * (f.root_order() / self.m));
        if self.scale.is_one() {
            r
        } else {
            f.mul(&r, &f.from_rat(&self.scale))
        }
    }

    /// self·e for e in `f`.
    pub fn mul_into<F: CoeffField>(&self, f: &F, e: &F::Elem) -> F::Elem {
        debug_assert_eq!(f.root_order() % self.m, 0);
        f.mul_scaled_root(e, &self.scale, self.root * (f.root_order() / self.m))
    }

    pub fn to_json(&self) -> Value {
        json!({"scale": fmt_rat(&self.scale), "root": self.root, "order": self.m})
    }
}

/// (t, a, ℓ) with ℓ stored as its exponent vector against the fixed ζ_{dᵢ}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeisenbergElement {
    pub delta: DeltaType,
    pub t: Unit,
    pub a: Vec<u64>,
    pub l: Vec<u64>,
}

impl HeisenbergElement {
    pub fn new(delta: &DeltaType, t: Unit, a: &[u64], l: &[u64]) -> Result<HeisenbergElement> {
        let g = delta.genus();
        if a.len() != g || l.len() != g || t.m != delta.root_order() {
            return Err(Error::DeltaMismatch);
        }
        let a = a.iter().zip(delta.divisors()).map(|(x, d)| x % d).collect();
        let l = l.iter().zip(delta.divisors()).map(|(x, d)| x % d).collect();
        Ok(HeisenbergElement {
            delta: delta.clone(),
            t,
            a,
            l,
        })
    }

    pub fn identity(delta: &DeltaType) -> HeisenbergElement {
        let g = delta.genus();
        HeisenbergElement {
            delta: delta.clone(),
            t: Unit::one(delta.root_order()),
            a: vec![0; g],
            l: vec![0; g],
        }
    }

    pub fn scalar(delta: &DeltaType, t: Unit) -> HeisenbergElement {
        HeisenbergElement {
            t,
            ..HeisenbergElement::identity(delta)
        }
    }

    /// (1, a, ℓ).
    pub fn lift(delta: &DeltaType, a: &[u64], l: &[u64]) -> HeisenbergElement {
        HeisenbergElement::new(delta, Unit::one(delta.root_order()), a, l)
            .expect("shapes match delta")
    }

    /// Generators (1, a_(i), 0) for i < g, then (1, 0, ℓ_(i)).
    pub fn generators(delta: &DeltaType) -> Vec<HeisenbergElement> {
        let g = delta.genus();
        let zero = vec![0; g];
        let mut out: Vec<_> = (0..g)
            .map(|i| HeisenbergElement::lift(delta, &delta.unit_vector(i), &zero))
            .collect();
        out.extend((0..g).map(|i| HeisenbergElement::lift(delta, &zero, &delta.unit_vector(i))));
        out
    }

    pub fn is_central(&self) -> bool {
        self.a.iter().all(|x| *x == 0) && self.l.iter().all(|x| *x == 0)
    }

    pub fn mul(&self, o: &HeisenbergElement) -> Result<HeisenbergElement> {
        heisenberg_mul(self, o)
    }

    pub fn inverse(&self) -> HeisenbergElement {
        // (t, a, ℓ)(s, −a, −ℓ) = (ts⟨−a, ℓ⟩, 0, 0), so s = t⁻¹⟨a, ℓ⟩.
        let dl = &self.delta;
        let t = self.t.inv().times_root(dl.pairing(&self.a, &self.l));
        HeisenbergElement {
            delta: dl.clone(),
            t,
            a: dl.neg(&self.a),
            l: dl.neg(&self.l),
        }
    }

    /// xⁿ = (tⁿ⟨a, ℓ⟩^{n(n−1)/2}, na, nℓ).
    pub fn pow(&self, n: u64) -> HeisenbergElement {
        let dl = &self.delta;
        let m = dl.root_order();
        let tri = ((n as u128 * n.saturating_sub(1) as u128 / 2) % m as u128) as u64;
        let t = self
            .t
            .pow(n)
            .times_root(dl.pairing(&self.a, &self.l) * tri % m);
        HeisenbergElement {
            delta: dl.clone(),
            t,
            a: dl.scale(n as i64, &self.a),
            l: dl.scale(n as i64, &self.l),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"t": self.t.to_json(), "a": self.a, "l": self.l})
    }
}

/// (t₁, a₁, ℓ₁)·(t₂, a₂, ℓ₂) = (t₁t₂⟨a₂, ℓ₁⟩, a₁ + a₂, ℓ₁ + ℓ₂).
pub fn heisenberg_mul(x: &HeisenbergElement, y: &HeisenbergElement) -> Result<HeisenbergElement> {
    if x.delta != y.delta {
        return Err(Error::DeltaMismatch);
    }
    let dl = &x.delta;
    Ok(HeisenbergElement {
        delta: dl.clone(),
        t: x.t.mul(&y.t).times_root(dl.pairing(&y.a, &x.l)),
        a: dl.add(&x.a, &y.a),
        l: dl.add(&x.l, &y.l),
    })
}

/// Group commutator u v u⁻¹ v⁻¹.
pub fn group_commutator(u: &HeisenbergElement, v: &HeisenbergElement) -> Result<HeisenbergElement> {
    heisenberg_mul(
        &heisenberg_mul(&heisenberg_mul(u, v)?, &u.inverse())?,
        &v.inverse(),
    )
}

/// An element (a, ℓ) of K(δ) ⊕ K(δ)∨.
pub type SymplecticPoint = (Vec<u64>, Vec<u64>);

/// e((a₁, ℓ₁), (a₂, ℓ₂)) = ⟨a₁, ℓ₂⟩/⟨a₂, ℓ₁⟩ as an exponent of ζ_m.
///
/// For lifts x, y of s₁, s₂ this is the commutator y x y⁻¹ x⁻¹.
pub fn commutator_pairing(delta: &DeltaType, s1: &SymplecticPoint, s2: &SymplecticPoint) -> u64 {
    let m = delta.root_order();
    (delta.pairing(&s1.0, &s2.1) + m - delta.pairing(&s2.0, &s1.1)) % m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_validation() {
        assert!(DeltaType::new(vec![8]).is_ok());
        assert!(DeltaType::new(vec![16, 8]).is_ok());
        assert!(DeltaType::new(vec![8, 16]).is_err());
        assert!(DeltaType::new(vec![4]).is_err());
        assert_eq!(DeltaType::parse("8,8").unwrap().order(), 64);
        let d = DeltaType::new(vec![16, 8]).unwrap();
        for i in 0..d.order() {
            assert_eq!(d.index(&d.element(i)), i);
        }
    }

    #[test]
    fn group_law_examples() {
        let d = DeltaType::new(vec![8]).unwrap();
        let (a, l) = (vec![3], vec![5]);
        let x = HeisenbergElement::lift(&d, &a, &[0]);
        let y = HeisenbergElement::lift(&d, &[0], &l);
        assert_eq!(x.mul(&y).unwrap(), HeisenbergElement::lift(&d, &a, &l));
        let yx = y.mul(&x).unwrap();
        assert_eq!(yx.t, Unit::root(d.pairing(&a, &l), 16));
        assert_eq!(yx.t.root, 2 * 15 % 16);
        let z = HeisenbergElement::new(&d, Unit::root(3, 16), &[6], &[7]).unwrap();
        assert!(z.mul(&z.inverse()).unwrap() == HeisenbergElement::identity(&d));
        for n in 0..10 {
            let naive = (0..n).fold(HeisenbergElement::identity(&d), |acc, _| {
                acc.mul(&z).unwrap()
            });
            assert_eq!(z.pow(n), naive);
        }
        let other = HeisenbergElement::identity(&DeltaType::new(vec![16]).unwrap());
        assert_eq!(z.mul(&other), Err(Error::DeltaMismatch));
    }
}
