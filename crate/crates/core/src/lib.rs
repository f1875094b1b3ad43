//! Algorithms for exact algebra decomposition, period lattices, finite Heisenberg
//! groups and an oracle-driven search engine.

pub mod algebra;
pub mod analytic;
pub mod engine;
pub mod error;
pub mod exact;
pub mod global;
pub mod heisenberg;
pub mod padic;
pub mod search;

pub use algebra::StructuredAlgebra;
pub use error::{Error, Result};
pub use exact::{BigRat, ExactMatrix, Matrix, NumberField, QPoly};
pub use heisenberg::{DeltaType, HeisenbergElement, ThetaNullVector};
