//! ℓ-local orders: seed orders and maximal orders.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::finite::{FpAlgebra, Subspace};
use crate::algebra::StructuredAlgebra;
use crate::error::{Error, Result};
use crate::exact::field::PrimeField;
use crate::exact::matrix::{determinant, kernel, Matrix};
use crate::exact::rational::{is_prime_u64, rat, rat_valuation, BigRat};
use crate::exact::Rationals;

use super::lattice::LocalLattice;

/// Upper bound on the projective points scanned by the final maximality certificate.
const MAX_CERTIFICATE_POINTS: u64 = 200_000;

/// A ℤ_(ℓ)-order of a [`StructuredAlgebra`], stored by its canonical lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalOrder {
    pub ell: u64,
    pub lattice: LocalLattice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

impl LocalOrder {
    pub fn basis(&self) -> &[Vec<BigRat>] {
        self.lattice.basis()
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// O/ℓO with structure constants in the order basis.
    pub fn residue_algebra(&self, alg: &StructuredAlgebra) -> FpAlgebra {
        let l = BigInt::from(self.ell);
        let b = self.basis();
        let n = b.len();
        let mut mult = vec![vec![vec![]; n]; n];
        for i in 0..n {
            for j in 0..n {
                let c = self
                    .lattice
                    .coords_mod(&alg.mul(&b[i], &b[j]), &l)
                    .expect("order is closed");
                mult[i][j] = c.iter().map(|x| x.to_u64().unwrap()).collect();
            }
        }
        let unit = self.reduce(&alg.one()).expect("order contains the unit");
        FpAlgebra::new(self.ell, mult, unit)
    }

    /// Order coordinates mod ℓ of an element of the order.
    pub fn reduce(&self, v: &[BigRat]) -> Option<Vec<u64>> {
        let l = BigInt::from(self.ell);
        self.lattice
            .coords_mod(v, &l)
            .map(|c| c.iter().map(|x| x.to_u64().unwrap()).collect())
    }

    /// The element with the given order coordinates (taken as integers in [0, ℓ)).
    pub fn lift(&self, c: &[u64]) -> Vec<BigRat> {
        let ints: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        self.lattice.combine(&ints)
    }

    /// v_ℓ of the discriminant det(Tr(b_i b_j)).
    pub fn discriminant_valuation(&self, alg: &StructuredAlgebra) -> i64 {
        let d = determinant(&Rationals, &alg.trace_form_on(self.basis()));
        rat_valuation(&d, self.ell).unwrap_or(i64::MAX)
    }

    /// Lattice of the preimage of a subspace of O/ℓO.
    fn preimage(&self, s: &Subspace) -> LocalLattice {
        let mut rows: Vec<Vec<BigRat>> = self
            .basis()
            .iter()
            .map(|b| b.iter().map(|x| x * rat(self.ell as i64)).collect())
            .collect();
        rows.extend(s.rows.iter().map(|r| self.lift(r)));
        LocalLattice::from_rows(self.ell, &rows, self.dim()).expect("full rank")
    }
}

/// Whether a lattice contains 1 and is closed under multiplication.
pub fn is_order(alg: &StructuredAlgebra, lattice: &LocalLattice) -> bool {
    if !lattice.contains(&alg.one()) {
        return false;
    }
    let b = lattice.basis();
    b.iter()
        .all(|x| b.iter().all(|y| lattice.contains(&alg.mul(x, y))))
}

/// The order ℤ_(ℓ)·1 + ℓ^r Λ, with Λ the span of the given basis and r the least exponent
/// making ℓ^r α_{ijk} integral.
pub fn seed_order(alg: &StructuredAlgebra, ell: u64) -> Result<LocalOrder> {
    if !is_prime_u64(ell) {
        return Err(Error::InvalidInput(format!("{ell} is not prime")));
    }
    let mut r = 0i64;
    for a in alg.mult().iter().flatten().flatten() {
        if let Some(v) = rat_valuation(a, ell) {
            r = r.max(-v);
        }
    }
    let s = BigRat::from_integer(super::lattice::ell_pow(ell, r as u32));
    let n = alg.dim();
    let mut rows: Vec<Vec<BigRat>> = (0..n)
        .map(|i| alg.scale(&s, &alg.basis_vector(i)))
        .collect();
    rows.push(alg.one());
    let lattice = LocalLattice::from_rows(ell, &rows, n)?;
    if !is_order(alg, &lattice) {
        return Err(Error::NotClosed(
            "scaled basis is not multiplicatively closed".into(),
        ));
    }
    Ok(LocalOrder { ell, lattice })
}

/// {x : x·I ⊆ I} (left) or {x : I·x ⊆ I} (right) for an ideal lattice ℓO ⊆ I ⊆ O.
fn idealizer(
    alg: &StructuredAlgebra,
    o: &LocalOrder,
    ideal: &LocalLattice,
    side: Side,
) -> Result<LocalOrder> {
    let ell = o.ell;
    let l = BigInt::from(ell);
    let n = o.dim();
    let ob = o.basis();
    let ib = ideal.basis();
    // Rows: (ideal basis k, coordinate t); columns: order basis m.
    let mut rows = vec![vec![0u64; n]; n * n];
    for (m, y) in ob.iter().enumerate() {
        for (k, x) in ib.iter().enumerate() {
            let prod = match side {
                Side::Left => alg.mul(y, x),
                Side::Right => alg.mul(x, y),
            };
            let c = ideal
                .coords_mod(&prod, &l)
                .ok_or_else(|| Error::NotClosed("lattice is not an ideal".into()))?;
            for (t, ct) in c.iter().enumerate() {
                rows[k * n + t][m] = ct.to_u64().unwrap();
            }
        }
    }
    let ker = kernel(&PrimeField::new(ell), &Matrix::from_rows(rows, n));
    if ker.is_empty() {
        return Ok(o.clone());
    }
    let inv_l = BigRat::new(1.into(), l);
    let mut gens: Vec<Vec<BigRat>> = ob.to_vec();
    gens.extend(ker.iter().map(|c| alg.scale(&inv_l, &o.lift(c))));
    Ok(LocalOrder {
        ell,
        lattice: LocalLattice::from_rows(ell, &gens, n)?,
    })
}

/// The ring generated by O and x, if it stays inside (1/ℓ)O.
fn adjoin_within(
    alg: &StructuredAlgebra,
    o: &LocalOrder,
    bound: &LocalLattice,
    x: &[BigRat],
) -> Option<LocalOrder> {
    let n = o.dim();
    let mut gens: Vec<Vec<BigRat>> = o.basis().to_vec();
    gens.push(x.to_vec());
    let mut lat = LocalLattice::from_rows(o.ell, &gens, n).ok()?;
    loop {
        let b = lat.basis().to_vec();
        let mut extra = Vec::new();
        for u in &b {
            for v in &b {
                let p = alg.mul(u, v);
                if !lat.contains(&p) {
                    if !bound.contains(&p) {
                        return None;
                    }
                    extra.push(p);
                }
            }
        }
        if extra.is_empty() {
            return Some(LocalOrder {
                ell: o.ell,
                lattice: lat,
            });
        }
        let mut all = b;
        all.extend(extra);
        lat = LocalLattice::from_rows(o.ell, &all, n).ok()?;
    }
}

/// One strictly larger order, or `None` when `o` is maximal at ℓ.
fn enlarge(alg: &StructuredAlgebra, o: &LocalOrder) -> Result<Option<LocalOrder>> {
    let a = o.residue_algebra(alg);
    let j = a.radical();
    let rad = o.preimage(&j);
    for side in [Side::Left, Side::Right] {
        let bigger = idealizer(alg, o, &rad, side)?;
        if bigger != *o {
            return Ok(Some(bigger));
        }
    }
    if alg.is_commutative() {
        // The multiplier ring of the radical is already the last step in the commutative case.
        return Ok(None);
    }
    let q = a.quotient(&j);
    let idems = q.alg.primitive_central_idempotents();
    if idems.len() > 1 {
        for e in &idems {
            let co = q.alg.sub(&q.alg.one(), e);
            let vecs: Vec<Vec<u64>> = (0..q.alg.dim())
                .map(|i| q.alg.mul(&co, &q.alg.basis_vector(i)))
                .collect();
            let maximal_ideal = o.preimage(&q.preimage(&Subspace::span(a.p, &vecs, q.alg.dim())));
            for side in [Side::Left, Side::Right] {
                let bigger = idealizer(alg, o, &maximal_ideal, side)?;
                if bigger != *o {
                    return Ok(Some(bigger));
                }
            }
        }
    }
    // Any order strictly between O and (1/ℓ)O contains w/ℓ with w̄ in a square-zero ideal of
    // O/ℓO, hence in the radical; scan the radical's projective points.
    let t = j.dim() as u32;
    let ell = o.ell;
    let points = (ell as u128).pow(t).saturating_sub(1) / (ell as u128 - 1);
    if points > MAX_CERTIFICATE_POINTS as u128 {
        return Err(Error::TooLarge(format!(
            "maximality certificate needs {points} radical points"
        )));
    }
    let bound = o.lattice.scaled(-1);
    let inv_l = BigRat::new(1.into(), BigInt::from(ell));
    for lead in 0..t as usize {
        let tail = t as usize - lead - 1;
        for k in 0..(ell as u128).pow(tail as u32) {
            let mut c = vec![0u64; t as usize];
            c[lead] = 1;
            let mut kk = k;
            for slot in c.iter_mut().skip(lead + 1) {
                *slot = (kk % ell as u128) as u64;
                kk /= ell as u128;
            }
            let w = j.combine(ell, &c);
            if !FpAlgebra::is_zero(&a.mul(&w, &w)) {
                continue;
            }
            let x = alg.scale(&inv_l, &o.lift(&w));
            if let Some(bigger) = adjoin_within(alg, o, &bound, &x) {
                if bigger != *o {
                    return Ok(Some(bigger));
                }
            }
        }
    }
    Ok(None)
}

/// Enlarges an order by strict steps inside (1/ℓ)·O until none is possible.
pub fn maximal_order(alg: &StructuredAlgebra, ord: &LocalOrder) -> Result<LocalOrder> {
    if !alg.is_semisimple() {
        return Err(Error::DegenerateTraceForm);
    }
    if !is_order(alg, &ord.lattice) {
        return Err(Error::NotClosed("input lattice is not an order".into()));
    }
    let mut o = ord.clone();
    while let Some(bigger) = enlarge(alg, &o)? {
        debug_assert!(bigger.lattice.contains_lattice(&o.lattice));
        o = bigger;
    }
    Ok(o)
}

/// A maximal order at ℓ grown from the seed order.
pub fn maximal_order_at(alg: &StructuredAlgebra, ell: u64) -> Result<LocalOrder> {
    if !alg.is_semisimple() {
        return Err(Error::DegenerateTraceForm);
    }
    maximal_order(alg, &seed_order(alg, ell)?)
}

/// Whether `o` admits no strictly larger order.
pub fn is_maximal(alg: &StructuredAlgebra, o: &LocalOrder) -> Result<bool> {
    Ok(enlarge(alg, o)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::split_etale_algebra;
    use crate::exact::poly::QPoly;
    use crate::exact::rational::rat_frac;

    #[test]
    fn seed_orders() {
        let m2 = StructuredAlgebra::matrix_algebra(2);
        let o = seed_order(&m2, 3).unwrap();
        let std = LocalLattice::from_rows(
            3,
            &(0..4).map(|i| m2.basis_vector(i)).collect::<Vec<_>>(),
            4,
        )
        .unwrap();
        assert_eq!(o.lattice, std);
        let h = StructuredAlgebra::quaternion(&rat_frac(1, 2), &rat(-1));
        let o = seed_order(&h, 2).unwrap();
        assert!(o.lattice.contains(&h.scale(&rat(2), &h.basis_vector(1))));
        assert!(!o.lattice.contains(&h.basis_vector(1)));
    }

    #[test]
    fn sqrt5_at_two() {
        let k = StructuredAlgebra::from_poly(&QPoly::from_ints(&[-5, 0, 1])).unwrap();
        let seed = seed_order(&k, 2).unwrap();
        assert_eq!(seed.discriminant_valuation(&k), 2);
        let o = maximal_order_at(&k, 2).unwrap();
        assert_eq!(o.discriminant_valuation(&k), 0);
        assert!(o.lattice.contains(&[rat_frac(1, 2), rat_frac(1, 2)]));
    }

    #[test]
    fn split_algebra_and_matrix_algebra_are_already_maximal() {
        let s = split_etale_algebra(2);
        let o = maximal_order_at(&s, 5).unwrap();
        assert_eq!(o, seed_order(&s, 5).unwrap());
        let m2 = StructuredAlgebra::matrix_algebra(2);
        assert!(is_maximal(&m2, &seed_order(&m2, 2).unwrap()).unwrap());
    }

    #[test]
    fn lipschitz_to_hurwitz() {
        let h = StructuredAlgebra::quaternion(&rat(-1), &rat(-1));
        let o = maximal_order_at(&h, 2).unwrap();
        assert!(o.lattice.contains(&[
            rat_frac(1, 2),
            rat_frac(1, 2),
            rat_frac(1, 2),
            rat_frac(1, 2)
        ]));
        assert!(is_maximal(&h, &o).unwrap());
        assert!(maximal_order_at(
            &StructuredAlgebra::from_poly(&QPoly::from_ints(&[0, 0, 1])).unwrap(),
            2
        )
        .is_err());
    }
}
