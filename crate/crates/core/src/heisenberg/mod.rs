//! The finite Heisenberg group 𝒢(δ), its standard representation, automorphisms,
//! translation matrices, Riemann relations and Mumford-form checks.

pub mod autos;
pub mod cyclo;
pub mod group;
pub mod mumford;
pub mod relations;
pub mod rep;
pub mod theta;

pub use autos::{
    automorphism_group, first_lift, lift_automorphism, lifts_of, symplectic_group,
    HeisenbergAutomorphism, SymplecticMap,
};
pub use cyclo::{CoeffField, ComplexField, Cyclotomic};
pub use group::{commutator_pairing, heisenberg_mul, DeltaType, HeisenbergElement, Unit};
pub use mumford::{marking_orbit, mumford_form_check, MumfordReport, MumfordScheme, Verdict};
pub use relations::{
    riemann_relations, riemann_relations_with, Quadric, RiemannRelation, Z2Choice,
};
pub use rep::{std_rep, translation_matrix, MonomialMatrix, UnitMatrix};
pub use theta::{theta_null_fixture, ThetaNullVector};
