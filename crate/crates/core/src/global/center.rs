//! Exact idempotents of the center and presentation of simple factors over their centers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::StructuredAlgebra;
use crate::error::{Error, Result};
use crate::exact::factor::factor_squarefree_rational;
use crate::exact::matrix::rank;
use crate::exact::numfield::NumberField;
use crate::exact::poly::{vector_minimal_polynomial, QPoly};
use crate::exact::rational::{lcm_denominators, rat, rat_int, BigRat};
use crate::exact::{Matrix, Rationals};

/// Evaluates a polynomial at an algebra element.
pub fn eval_at(alg: &StructuredAlgebra, p: &QPoly, x: &[BigRat]) -> Vec<BigRat> {
    let mut acc = alg.zero();
    for c in p.coeffs().iter().rev() {
        acc = alg.add(&alg.mul(&acc, x), &alg.scale(c, &alg.one()));
    }
    acc
}

pub fn min_poly_of(alg: &StructuredAlgebra, x: &[BigRat]) -> QPoly {
    vector_minimal_polynomial(&alg.left_matrix(x), &alg.one())
}

/// An element generating the commutative subalgebra spanned by `basis` (containing 1),
/// together with its minimal polynomial. Candidates Σ t^k z_k are tried for t = 1, 2, …;
/// only finitely many t fail.
pub fn primitive_element(alg: &StructuredAlgebra, basis: &[Vec<BigRat>]) -> (Vec<BigRat>, QPoly) {
    for t in 1i64.. {
        let mut x = alg.zero();
        let mut w = BigRat::one();
        for z in basis {
            x = alg.add(&x, &alg.scale(&w, z));
            w *= rat(t);
        }
        let m = min_poly_of(alg, &x);
        if m.deg() == basis.len() {
            return (x, m);
        }
    }
    unreachable!()
}

/// s·a + t·b = gcd(a, b) in ℚ[x]; returns (gcd, s).
fn xgcd_left(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s2 = s0.sub(&q.mul(&s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    let lc = r0.lead();
    (r0.monic(), s0.scale(&(BigRat::one() / lc)))
}

/// The primitive idempotents of Z(E), exact, one per field factor of the center.
pub fn center_idempotents(alg: &StructuredAlgebra) -> Result<Vec<Vec<BigRat>>> {
    if !alg.is_semisimple() {
        return Err(Error::NotSemisimple);
    }
    let z = alg.center();
    let (theta, m) = primitive_element(alg, &z);
    let factors = factor_squarefree_rational(&m);
    let mut out = Vec::with_capacity(factors.len());
    for fi in &factors {
        // e_i = g·(g⁻¹ mod f_i) with g = m/f_i: 1 mod f_i and 0 mod every other factor.
        let g = m.divrem(fi).0;
        let (_, s) = xgcd_left(&g, fi);
        let h = g.mul(&s).rem(&m);
        out.push(eval_at(alg, &h, &theta));
    }
    Ok(out)
}

/// e·E for a central idempotent e, as an algebra with unit e.
pub fn factor_algebra(alg: &StructuredAlgebra, e: &[BigRat]) -> Result<StructuredAlgebra> {
    let rows: Vec<Vec<BigRat>> = (0..alg.dim())
        .map(|i| alg.mul(e, &alg.basis_vector(i)))
        .collect();
    let basis = crate::exact::matrix::row_space(&Rationals, &Matrix::from_rows(rows, alg.dim()));
    alg.subalgebra(&basis, e)
}

/// A simple algebra rewritten over its center Z ≅ ℚ[t]/(m): the returned algebra has
/// `base() = Some(Z)` and is isomorphic to `alg`.
pub fn over_center(alg: &StructuredAlgebra) -> Result<StructuredAlgebra> {
    if !alg.is_semisimple() {
        return Err(Error::NotSemisimple);
    }
    let z = alg.center();
    let (theta0, m0) = primitive_element(alg, &z);
    // Scale θ so that its minimal polynomial is integral.
    let den = lcm_denominators(m0.coeffs());
    let theta = alg.scale(&rat_int(&den), &theta0);
    let m = min_poly_of(alg, &theta);
    let k = NumberField::new(m).map_err(|_| {
        Error::InvalidInput("algebra is not simple (its center is not a field)".into())
    })?;
    let f = k.degree();
    let powers: Vec<Vec<BigRat>> = (0..f).map(|a| alg.pow(&theta, a as u32)).collect();
    let mut gens: Vec<Vec<BigRat>> = Vec::new();
    let mut flat: Vec<Vec<BigRat>> = Vec::new();
    for i in 0..alg.dim() {
        let e = alg.basis_vector(i);
        let block: Vec<Vec<BigRat>> = powers.iter().map(|p| alg.mul(p, &e)).collect();
        let mut trial = flat.clone();
        trial.extend(block.iter().cloned());
        if rank(&Rationals, &Matrix::from_rows(trial.clone(), alg.dim())) == trial.len() {
            gens.push(e);
            flat = trial;
        }
    }
    let n = gens.len();
    if n * f != alg.dim() {
        return Err(Error::InvalidInput(
            "algebra is not free over its center".into(),
        ));
    }
    let to_k = |v: &[BigRat]| -> Result<Vec<Vec<BigRat>>> {
        let c = StructuredAlgebra::coords_in(&flat, v)
            .ok_or_else(|| Error::NotClosed("product outside the algebra".into()))?;
        Ok((0..n).map(|i| c[i * f..(i + 1) * f].to_vec()).collect())
    };
    let mut mult = Vec::with_capacity(n);
    for a in &gens {
        let mut row = Vec::with_capacity(n);
        for b in &gens {
            row.push(to_k(&alg.mul(a, b))?);
        }
        mult.push(row);
    }
    let unit = to_k(&alg.one())?;
    StructuredAlgebra::over_number_field(&k, &mult, &unit)
}

/// Integer ℤ-basis of the order ℤ·1 + Σ ℤ·D e_i, with D clearing the structure constants.
pub fn integral_order_basis(alg: &StructuredAlgebra) -> Vec<Vec<BigRat>> {
    let n = alg.dim();
    let d = lcm_denominators(alg.mult().iter().flatten().flatten());
    let dr = rat_int(&d);
    let mut rows = vec![alg.one()];
    rows.extend((0..n).map(|i| alg.scale(&dr, &alg.basis_vector(i))));
    let den = lcm_denominators(rows.iter().flatten());
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|x| (x * rat_int(&den)).to_integer()).collect())
        .collect();
    let h = crate::exact::intmat::hnf_basis(&Matrix::from_rows(ints, n));
    (0..h.rows())
        .map(|i| {
            h.row(i)
                .iter()
                .map(|x| BigRat::new(x.clone(), den.clone()))
                .collect::<Vec<BigRat>>()
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect()
}
