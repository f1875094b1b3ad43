//! Structure-constant algebras over ℚ and over prime fields.

pub mod finite;
pub mod structured;

pub use finite::{FpAlgebra, Quotient, Subspace};
pub use structured::{split_etale_algebra, StructuredAlgebra};
