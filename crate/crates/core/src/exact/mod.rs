//! Exact arithmetic: rationals, residue rings, number fields, polynomials and matrices.

pub mod factor;
pub mod field;
pub mod intmat;
pub mod json;
pub mod matrix;
pub mod numfield;
pub mod poly;
pub mod rational;
pub mod residue;
pub mod roots;

pub use field::{Field, PrimeField, Rationals};
pub use intmat::{hermite_normal_form, smith_normal_form, IntMatrix};
pub use json::ExactMatrix;
pub use matrix::Matrix;
pub use numfield::{NumberField, NumberFieldElem};
pub use poly::{char_poly, minimal_polynomial, QPoly};
pub use rational::BigRat;
pub use residue::{ResidueInt, ResidueRing};
