//! Bounded brute-force search and Euclidean lattice bounds.

pub mod enumerate;
pub mod lattice;

pub use enumerate::{decimal_codec, enumerate_bounded, SearchSpace, DECIMAL_ALPHABET};
pub use lattice::{covering_point, generators_in_ball, EuclideanLattice, LatticePoint};
