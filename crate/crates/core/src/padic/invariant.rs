//! Local invariants of simple factors and multiplicities of modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::finite::{FpAlgebra, Subspace};
use crate::algebra::StructuredAlgebra;
use crate::error::{Error, Result};
use crate::exact::json::rat_to_json;
use crate::exact::matrix::{trace, Matrix};
use crate::exact::rational::{rat_valuation, BigRat};
use crate::exact::Rationals;

use super::etale::{split_etale, ApproxIdempotent};
use super::order::{maximal_order_at, LocalOrder};

/// A simple factor M_n(D) of E ⊗ ℚ_ℓ with D of index d over its center Z_i,
/// [Z_i : ℚ_ℓ] = local_degree and residue degree f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalInvariant {
    pub n: u64,
    pub d: u64,
    pub invariant: BigRat,
    pub local_degree: u64,
    pub residue_degree: u64,
}

impl LocalInvariant {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "d": self.d,
            "invariant": rat_to_json(&self.invariant),
            "local_degree": self.local_degree,
            "residue_degree": self.residue_degree,
        })
    }
}

/// Central idempotents of E ⊗ ℚ_ℓ (one per simple factor), in algebra coordinates.
pub fn central_idempotents(
    alg: &StructuredAlgebra,
    ell: u64,
    n: u32,
) -> Result<Vec<ApproxIdempotent>> {
    if !alg.is_semisimple() {
        return Err(Error::NotSemisimple);
    }
    let z = alg.center();
    let zalg = alg.subalgebra(&z, &alg.one())?;
    let split = split_etale(&zalg, ell, n)?;
    Ok(split
        .idempotents
        .into_iter()
        .map(|e| {
            let mut v = alg.zero();
            for (c, row) in e.element.iter().zip(&z) {
                v = alg.add(&v, &alg.scale(c, row));
            }
            ApproxIdempotent {
                element: v,
                ell,
                precision: e.precision,
            }
        })
        .collect())
}

/// The subalgebra ē·A of a residue algebra, for a central idempotent ē.
fn corner(a: &FpAlgebra, e: &[u64]) -> (Subspace, FpAlgebra) {
    let vecs: Vec<Vec<u64>> = (0..a.dim()).map(|i| a.mul(e, &a.basis_vector(i))).collect();
    let s = Subspace::span(a.p, &vecs, a.dim());
    let sub = a.subalgebra(&s, e);
    (s, sub)
}

fn reduce_idempotent(o: &LocalOrder, a: &FpAlgebra, element: &[BigRat]) -> Result<Vec<u64>> {
    let e = o
        .reduce(element)
        .ok_or_else(|| Error::PrecisionTooLow("idempotent is not integral at ℓ".into()))?;
    if FpAlgebra::is_zero(&e) || a.mul(&e, &e) != e {
        return Err(Error::PrecisionTooLow(
            "idempotent does not reduce to an idempotent mod ℓ".into(),
        ));
    }
    Ok(e)
}

/// n_i and the invariant r/d_i of the simple factor cut out by `idem`.
///
/// With A_i = ē(O/ℓO) for a maximal order O, dim A_i = d²n²k, dim A_i/J = n²d·f where
/// k = [Z_i:ℚ_ℓ] and f is the residue degree of Z_i. When d > 1 the uniformizer class M ∈ J∖J²
/// satisfies M x ≡ x^{q^b} M (mod J²) for a generator x of the center of A_i/J and q = ℓ^f;
/// then the invariant is b⁻¹ mod d over d.
pub fn local_invariant(
    alg: &StructuredAlgebra,
    ell: u64,
    idem: &ApproxIdempotent,
) -> Result<LocalInvariant> {
    if !alg.is_semisimple() {
        return Err(Error::NotSemisimple);
    }
    if idem.precision == 0 {
        return Err(Error::PrecisionTooLow(
            "precision must be at least 1".into(),
        ));
    }
    let z = alg.center();
    let zalg = alg.subalgebra(&z, &alg.one())?;
    let ez = StructuredAlgebra::coords_in(&z, &idem.element)
        .ok_or_else(|| Error::InvalidInput("idempotent is not central".into()))?;
    let oz = maximal_order_at(&zalg, ell)?;
    let az = oz.residue_algebra(&zalg);
    let ebar_z = reduce_idempotent(&oz, &az, &ez)?;
    let (_, cz) = corner(&az, &ebar_z);
    let k = cz.dim() as u64;
    let f = (cz.dim() - cz.radical().dim()) as u64;
    if cz
        .quotient(&cz.radical())
        .alg
        .primitive_central_idempotents()
        .len()
        != 1
    {
        return Err(Error::InvalidInput(
            "idempotent is not primitive in the center".into(),
        ));
    }

    let o = maximal_order_at(alg, ell)?;
    let a = o.residue_algebra(alg);
    let ebar = reduce_idempotent(&o, &a, &idem.element)?;
    let (_, ai) = corner(&a, &ebar);
    let dim_ai = ai.dim() as u64;
    let j = ai.radical();
    let x_dim = dim_ai - j.dim() as u64;
    let inconsistent = || Error::InvalidInput("dimension counts are inconsistent".into());
    if dim_ai % k != 0 || x_dim % f != 0 {
        return Err(inconsistent());
    }
    let (d2n2, n2d) = (dim_ai / k, x_dim / f);
    if d2n2 % n2d != 0 {
        return Err(inconsistent());
    }
    let d = d2n2 / n2d;
    if n2d % d != 0 {
        return Err(inconsistent());
    }
    let n2 = n2d / d;
    let n = (n2 as f64).sqrt().round() as u64;
    if n * n != n2 || d * d * n2 != d2n2 {
        return Err(inconsistent());
    }
    let invariant = if d == 1 {
        BigRat::zero()
    } else {
        uniformizer_invariant(&ai, &j, ell, f, d)?
    };
    Ok(LocalInvariant {
        n,
        d,
        invariant,
        local_degree: k,
        residue_degree: f,
    })
}

fn uniformizer_invariant(ai: &FpAlgebra, j: &Subspace, ell: u64, f: u64, d: u64) -> Result<BigRat> {
    let j2 = ai.product_space(j, j);
    let m = j
        .rows
        .iter()
        .find(|r| !j2.contains(ell, r))
        .ok_or_else(|| Error::InvalidInput("radical equals its square".into()))?;
    let b = ai.quotient(j);
    let cb = b.alg.center();
    let target = cb.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut x = None;
    for attempt in 0..256 {
        let cand = if attempt < cb.dim() {
            cb.rows[attempt].clone()
        } else {
            let c: Vec<u64> = (0..cb.dim()).map(|_| rng.gen_range(0..ell)).collect();
            cb.combine(ell, &c)
        };
        if b.alg.min_poly(&cand).len() - 1 == target {
            x = Some(cand);
            break;
        }
    }
    let x =
        x.ok_or_else(|| Error::InvalidInput("no generator of the residue center found".into()))?;
    let xl = b.lift(&x);
    let mx = ai.mul(m, &xl);
    let mut y = xl.clone();
    for bexp in 1..d {
        for _ in 0..f {
            y = ai.pow(&y, ell as u128);
        }
        if j2.contains(ell, &ai.sub(&mx, &ai.mul(&y, m))) {
            let (bb, dd) = (BigInt::from(bexp), BigInt::from(d));
            let g = bb.extended_gcd(&dd);
            if !g.gcd.to_u64().is_some_and(|v| v == 1) {
                return Err(Error::InvalidInput(
                    "conjugation exponent is not a unit".into(),
                ));
            }
            let r = g.x.mod_floor(&dd);
            return Ok(BigRat::new(r, dd));
        }
    }
    Err(Error::PrecisionTooLow(
        "uniformizer conjugation test found no exponent".into(),
    ))
}

/// One simple factor's share of a module.
#[derive(Clone, Debug)]
pub struct ModuleComponent {
    pub projector: ApproxIdempotent,
    pub invariant: LocalInvariant,
    pub rank: u64,
    pub multiplicity: u64,
}

impl ModuleComponent {
    pub fn to_json(&self) -> Value {
        json!({
            "projector": self.projector.to_json(),
            "local": self.invariant.to_json(),
            "rank": self.rank,
            "multiplicity": self.multiplicity,
        })
    }
}

/// Multiplicities of the simple E ⊗ ℚ_ℓ-modules in V, from the ranks of the projector actions.
///
/// The rank of ρ(ẽ) is the integer in [0, dim V] congruent to Tr ρ(ẽ) modulo ℓ^{N−c}, where
/// ℓ^c bounds the denominators of ρ on the maximal order.
pub fn decompose_module(
    alg: &StructuredAlgebra,
    rep: &[Matrix<BigRat>],
    ell: u64,
    n: u32,
) -> Result<Vec<ModuleComponent>> {
    alg.check_representation(rep)?;
    let dim_v = rep[0].rows() as u64;
    let o = maximal_order_at(alg, ell)?;
    let mut c: i64 = 0;
    for b in o.basis() {
        for x in StructuredAlgebra::act(rep, b).entries() {
            if let Some(v) = rat_valuation(x, ell) {
                c = c.max(-v);
            }
        }
    }
    let margin = n as i64 - c;
    if margin <= 0 || (ell as f64).powi(margin as i32) <= dim_v as f64 {
        return Err(Error::PrecisionTooLow(format!("need ℓ^(N−{c}) > {dim_v}")));
    }
    let mut out = Vec::new();
    for e in central_idempotents(alg, ell, n)? {
        let t = trace(&Rationals, &StructuredAlgebra::act(rep, &e.element));
        let candidates: Vec<u64> = (0..=dim_v)
            .filter(|&r| {
                rat_valuation(&(&t - BigRat::from_integer(r.into())), ell)
                    .is_none_or(|v| v >= margin)
            })
            .collect();
        let [rank] = candidates[..] else {
            return Err(Error::PrecisionTooLow(
                "trace does not determine the rank".into(),
            ));
        };
        let inv = local_invariant(alg, ell, &e)?;
        let simple_dim = inv.n * inv.d * inv.d * inv.local_degree;
        if rank % simple_dim != 0 {
            return Err(Error::InvalidInput(format!(
                "rank {rank} is not a multiple of the simple module dimension {simple_dim}"
            )));
        }
        out.push(ModuleComponent {
            projector: e,
            invariant: inv,
            rank,
            multiplicity: rank / simple_dim,
        });
    }
    Ok(out)
}

/// All simple factors of E ⊗ ℚ_ℓ with their invariants.
pub fn local_decomposition(
    alg: &StructuredAlgebra,
    ell: u64,
    n: u32,
) -> Result<Vec<(ApproxIdempotent, LocalInvariant)>> {
    central_idempotents(alg, ell, n)?
        .into_iter()
        .map(|e| {
            let inv = local_invariant(alg, ell, &e)?;
            Ok((e, inv))
        })
        .collect()
}
