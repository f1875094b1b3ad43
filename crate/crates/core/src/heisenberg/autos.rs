//! Symplectic automorphisms of K(δ) ⊕ K(δ)∨ and their lifts to Aut_{𝔾_m} 𝒢(δ).

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde_json::{json, Value};

use super::group::{
    commutator_pairing, group_commutator, DeltaType, HeisenbergElement, SymplecticPoint, Unit,
};
use super::rep::{intertwining_space, std_rep, UnitMatrix};
use crate::error::{Error, Result};

/// Default cap on the number of candidate maps examined by [`symplectic_group`].
pub const SP_ENUMERATION_BUDGET: u64 = 1 << 24;

/// An endomorphism of K(δ) ⊕ K(δ)∨ given by the images of a_(1..g) followed by ℓ_(1..g).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticMap {
    pub delta: DeltaType,
    pub images: Vec<SymplecticPoint>,
}

fn basis(delta: &DeltaType) -> Vec<SymplecticPoint> {
    let g = delta.genus();
    let zero = vec![0; g];
    let mut out: Vec<SymplecticPoint> = (0..g)
        .map(|i| (delta.unit_vector(i), zero.clone()))
        .collect();
    out.extend((0..g).map(|i| (zero.clone(), delta.unit_vector(i))));
    out
}

fn point_scale(delta: &DeltaType, n: u64, s: &SymplecticPoint) -> SymplecticPoint {
    (delta.scale(n as i64, &s.0), delta.scale(n as i64, &s.1))
}

fn point_add(delta: &DeltaType, x: &SymplecticPoint, y: &SymplecticPoint) -> SymplecticPoint {
    (delta.add(&x.0, &y.0), delta.add(&x.1, &y.1))
}

fn point_is_zero(s: &SymplecticPoint) -> bool {
    s.0.iter().chain(&s.1).all(|x| *x == 0)
}

/// All of K(δ) ⊕ K(δ)∨, a-part major.
pub fn symplectic_points(delta: &DeltaType) -> Vec<SymplecticPoint> {
    let els = delta.elements();
    els.iter()
        .flat_map(|a| els.iter().map(move |l| (a.clone(), l.clone())))
        .collect()
}

impl SymplecticMap {
    pub fn identity(delta: &DeltaType) -> SymplecticMap {
        SymplecticMap {
            delta: delta.clone(),
            images: basis(delta),
        }
    }

    pub fn apply(&self, s: &SymplecticPoint) -> SymplecticPoint {
        let dl = &self.delta;
        let g = dl.genus();
        let zero: SymplecticPoint = (vec![0; g], vec![0; g]);
        let coeffs = s.0.iter().chain(&s.1);
        coeffs.zip(&self.images).fold(zero, |acc, (c, img)| {
            point_add(dl, &acc, &point_scale(dl, *c, img))
        })
    }

    /// self ∘ other.
    pub fn compose(&self, other: &SymplecticMap) -> SymplecticMap {
        SymplecticMap {
            delta: self.delta.clone(),
            images: other.images.iter().map(|s| self.apply(s)).collect(),
        }
    }

    /// Whether the images respect the orders dᵢ of the generators they replace.
    pub fn is_well_defined(&self) -> bool {
        let d = self.delta.divisors();
        let g = d.len();
        self.images
            .iter()
            .enumerate()
            .all(|(k, img)| point_is_zero(&point_scale(&self.delta, d[k % g], img)))
    }

    /// e(σx, σy) = e(x, y) on all pairs of generators.
    pub fn preserves_pairing(&self) -> bool {
        let b = basis(&self.delta);
        (0..b.len()).all(|p| {
            (p + 1..b.len()).all(|q| {
                commutator_pairing(&self.delta, &self.images[p], &self.images[q])
                    == commutator_pairing(&self.delta, &b[p], &b[q])
            })
        })
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .images
            .iter()
            .map(|(a, l)| json!({"a": a, "l": l}))
            .collect::<Vec<_>>())
    }
}

/// Sp(K(δ) ⊕ K(δ)∨) by exhaustive search over the images of the 2g generators.
///
/// A pairing-preserving endomorphism is injective because e is nondegenerate, so the
/// well-defined maps that preserve e on generators are exactly the symplectic automorphisms.
pub fn symplectic_group(delta: &DeltaType, budget: u64) -> Result<Vec<SymplecticMap>> {
    let points = symplectic_points(delta);
    let n = points.len() as u64;
    let g2 = 2 * delta.genus() as u32;
    n.checked_pow(g2).filter(|t| *t <= budget).ok_or_else(|| {
        Error::TooLarge(format!(
            "{n}^{g2} candidate maps exceed the budget of {budget}; use symplectic_generators"
        ))
    })?;
    let d = delta.divisors();
    let g = d.len();
    // Candidates for each image slot, filtered by order first.
    let slots: Vec<Vec<usize>> = (0..2 * g)
        .map(|k| {
            (0..points.len())
                .filter(|&i| point_is_zero(&point_scale(delta, d[k % g], &points[i])))
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = slots.iter().map(Vec::len).collect();
    let count: usize = sizes.iter().product();
    let found: Vec<SymplecticMap> = (0..count)
        .into_par_iter()
        .filter_map(|mut idx| {
            let mut images = Vec::with_capacity(2 * g);
            for (slot, size) in slots.iter().zip(&sizes) {
                images.push(points[slot[idx % size]].clone());
                idx /= size;
            }
            let s = SymplecticMap {
                delta: delta.clone(),
                images,
            };
            s.preserves_pairing().then_some(s)
        })
        .collect();
    Ok(found)
}

/// Generators of Sp: for each i the swap a_(i) ↦ ℓ_(i), ℓ_(i) ↦ −a_(i) and the shear a_(i) ↦ a_(i) + ℓ_(i);
/// for i < j with dᵢ = dⱼ also a_(i) ↦ a_(i) + a_(j), ℓ_(j) ↦ ℓ_(j) − ℓ_(i).
pub fn symplectic_generators(delta: &DeltaType) -> Vec<SymplecticMap> {
    let g = delta.genus();
    let b = basis(delta);
    let mut out = Vec::new();
    for i in 0..g {
        let mut swap = b.clone();
        swap[i] = b[g + i].clone();
        swap[g + i] = (delta.neg(&b[i].0), b[i].1.clone());
        out.push(SymplecticMap {
            delta: delta.clone(),
            images: swap,
        });
        let mut shear = b.clone();
        shear[i] = point_add(delta, &b[i], &b[g + i]);
        out.push(SymplecticMap {
            delta: delta.clone(),
            images: shear,
        });
    }
    let d = delta.divisors();
    for i in 0..g {
        for j in i + 1..g {
            if d[i] != d[j] {
                continue;
            }
            let mut m = b.clone();
            m[i] = point_add(delta, &b[i], &b[j]);
            m[g + j] = (
                b[g + j].0.clone(),
                delta.add(&b[g + j].1, &delta.neg(&b[g + i].1)),
            );
            out.push(SymplecticMap {
                delta: delta.clone(),
                images: m,
            });
        }
    }
    out
}

/// Closure of a generating set under composition.
pub fn symplectic_closure(
    delta: &DeltaType,
    gens: &[SymplecticMap],
    budget: usize,
) -> Result<Vec<SymplecticMap>> {
    let id = SymplecticMap::identity(delta);
    let mut seen: HashSet<SymplecticMap> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = s.compose(&x);
            if seen.insert(y.clone()) {
                if out.len() >= budget {
                    return Err(Error::TooLarge(format!(
                        "closure exceeds {budget} elements"
                    )));
                }
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

/// An automorphism of 𝒢(δ) fixing 𝔾_m, given by the images of (1, a_(i), 0) then (1, 0, ℓ_(i)).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeisenbergAutomorphism {
    pub delta: DeltaType,
    pub images: Vec<HeisenbergElement>,
}

impl HeisenbergAutomorphism {
    pub fn identity(delta: &DeltaType) -> HeisenbergAutomorphism {
        HeisenbergAutomorphism {
            delta: delta.clone(),
            images: HeisenbergElement::generators(delta),
        }
    }

    /// Conjugation x ↦ h x h⁻¹.
    pub fn inner(h: &HeisenbergElement) -> HeisenbergAutomorphism {
        let hinv = h.inverse();
        let images = HeisenbergElement::generators(&h.delta)
            .iter()
            .map(|x| h.mul(x).and_then(|y| y.mul(&hinv)).expect("same delta"))
            .collect();
        HeisenbergAutomorphism {
            delta: h.delta.clone(),
            images,
        }
    }

    /// (t, a, ℓ) = t·Π(1, a_(i), 0)^{aᵢ}·Π(1, 0, ℓ_(i))^{ℓᵢ}, mapped factor by factor.
    pub fn apply(&self, x: &HeisenbergElement) -> Result<HeisenbergElement> {
        if x.delta != self.delta {
            return Err(Error::DeltaMismatch);
        }
        let mut acc = HeisenbergElement::scalar(&self.delta, x.t.clone());
        for (e, img) in x.a.iter().chain(&x.l).zip(&self.images) {
            acc = acc.mul(&img.pow(*e))?;
        }
        Ok(acc)
    }

    /// self ∘ other.
    pub fn compose(&self, other: &HeisenbergAutomorphism) -> Result<HeisenbergAutomorphism> {
        let images = other
            .images
            .iter()
            .map(|x| self.apply(x))
            .collect::<Result<_>>()?;
        Ok(HeisenbergAutomorphism {
            delta: self.delta.clone(),
            images,
        })
    }

    /// The induced map on 𝒢(δ)/𝔾_m.
    pub fn sigma(&self) -> SymplecticMap {
        SymplecticMap {
            delta: self.delta.clone(),
            images: self
                .images
                .iter()
                .map(|x| (x.a.clone(), x.l.clone()))
                .collect(),
        }
    }

    /// Checks the defining relations on the images: orders dᵢ and the generator commutators.
    pub fn verify_relations(&self) -> Result<()> {
        let gens = HeisenbergElement::generators(&self.delta);
        let d = self.delta.divisors();
        let g = d.len();
        for (k, img) in self.images.iter().enumerate() {
            if img.pow(d[k % g]) != HeisenbergElement::identity(&self.delta) {
                return Err(Error::BadRootChoice(format!(
                    "image of generator {k} does not have order dividing {}",
                    d[k % g]
                )));
            }
        }
        for p in 0..gens.len() {
            for q in p + 1..gens.len() {
                if group_commutator(&self.images[p], &self.images[q])?
                    != group_commutator(&gens[p], &gens[q])?
                {
                    return Err(Error::BadRootChoice(format!(
                        "commutator of generators {p} and {q} not preserved"
                    )));
                }
            }
        }
        Ok(())
    }

    /// f with f·ρ(x) = ρ(φ(x))·f, unique up to scalar.
    pub fn intertwiner(&self) -> Result<UnitMatrix> {
        let pairs: Vec<_> = HeisenbergElement::generators(&self.delta)
            .iter()
            .zip(&self.images)
            .map(|(x, y)| (std_rep(x), std_rep(y)))
            .collect();
        let mut space = intertwining_space(&pairs);
        match space.len() {
            0 => Err(Error::NoSolution),
            1 => Ok(space.pop().expect("one solution")),
            k => Err(Error::InvalidInput(format!(
                "intertwining space has dimension {k}; the map does not fix the centre"
            ))),
        }
    }

    /// Dimension of the solution space of the intertwining system.
    pub fn intertwining_dimension(&self) -> usize {
        let pairs: Vec<_> = HeisenbergElement::generators(&self.delta)
            .iter()
            .zip(&self.images)
            .map(|(x, y)| (std_rep(x), std_rep(y)))
            .collect();
        intertwining_space(&pairs).len()
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .images
            .iter()
            .map(HeisenbergElement::to_json)
            .collect::<Vec<_>>())
    }
}

/// The ζ_m-exponents ψ with ψ^{d} = ⟨b, m⟩^{d(d−1)/2}.
pub fn root_choices(delta: &DeltaType, d: u64, image: &SymplecticPoint) -> Vec<u64> {
    let m = delta.root_order();
    let target = (delta.pairing(&image.0, &image.1) as u128 * (d as u128 * (d as u128 - 1) / 2)
        % m as u128) as u64;
    (0..m).filter(|psi| psi * d % m == target).collect()
}

/// The automorphism with (1, a_(i), 0) ↦ (ψᵢ, bᵢ, mᵢ) and (1, 0, ℓ_(i)) ↦ (ωᵢ, bᵢ', mᵢ'),
/// where σ(a_(i)) = (bᵢ, mᵢ), σ(ℓ_(i)) = (bᵢ', mᵢ') and ψ, ω are ζ_m-exponents.
pub fn lift_automorphism(
    sigma: &SymplecticMap,
    psi: &[u64],
    omega: &[u64],
) -> Result<HeisenbergAutomorphism> {
    let dl = &sigma.delta;
    let d = dl.divisors();
    let g = d.len();
    let m = dl.root_order();
    if psi.len() != g || omega.len() != g || sigma.images.len() != 2 * g {
        return Err(Error::DeltaMismatch);
    }
    if !sigma.is_well_defined() || !sigma.preserves_pairing() {
        return Err(Error::InvalidInput(
            "σ is not a symplectic automorphism".into(),
        ));
    }
    let mut images = Vec::with_capacity(2 * g);
    for (k, root) in psi.iter().chain(omega).enumerate() {
        let img = &sigma.images[k];
        let di = d[k % g];
        if !root_choices(dl, di, img).contains(&(root % m)) {
            let name = if k < g { "psi" } else { "omega" };
            return Err(Error::BadRootChoice(format!(
                "{name}[{}] = ζ_{m}^{root} does not satisfy the {di}-th power condition",
                k % g
            )));
        }
        images.push(HeisenbergElement::new(
            dl,
            Unit::root(*root, m),
            &img.0,
            &img.1,
        )?);
    }
    let f = HeisenbergAutomorphism {
        delta: dl.clone(),
        images,
    };
    f.verify_relations()?;
    Ok(f)
}

/// All lifts of σ: Π dᵢ² of them.
pub fn lifts_of(sigma: &SymplecticMap) -> Vec<HeisenbergAutomorphism> {
    let dl = &sigma.delta;
    let d = dl.divisors();
    let g = d.len();
    let choices: Vec<Vec<u64>> = (0..2 * g)
        .map(|k| root_choices(dl, d[k % g], &sigma.images[k]))
        .collect();
    let total: usize = choices.iter().map(Vec::len).product();
    (0..total)
        .filter_map(|mut idx| {
            let mut roots = Vec::with_capacity(2 * g);
            for c in &choices {
                roots.push(c[idx % c.len()]);
                idx /= c.len();
            }
            lift_automorphism(sigma, &roots[..g], &roots[g..]).ok()
        })
        .collect()
}

/// One lift of σ, with the smallest root exponents.
pub fn first_lift(sigma: &SymplecticMap) -> Result<HeisenbergAutomorphism> {
    let dl = &sigma.delta;
    let d = dl.divisors();
    let g = d.len();
    let roots: Vec<u64> = (0..2 * g)
        .map(|k| {
            root_choices(dl, d[k % g], &sigma.images[k])
                .first()
                .copied()
                .ok_or_else(|| Error::BadRootChoice(format!("no root for slot {k}")))
        })
        .collect::<Result<_>>()?;
    lift_automorphism(sigma, &roots[..g], &roots[g..])
}

/// Aut_{𝔾_m} 𝒢(δ) in full, as the lifts of every element of Sp.
pub fn automorphism_group(delta: &DeltaType, budget: u64) -> Result<Vec<HeisenbergAutomorphism>> {
    let sp = symplectic_group(delta, budget)?;
    Ok(sp.par_iter().flat_map_iter(lifts_of).collect())
}
