//! Semisimple algebras over number fields: Wedderburn decomposition, Brauer invariants and
//! signatures of symmetric and Hermitian forms.

pub mod center;
pub mod invariants;
pub mod signature;

pub use center::{center_idempotents, over_center};
pub use invariants::{
    all_invariants, decompose, kth_power_divisibility, ramified_place_candidates, real_splitting,
    real_splitting_at, sizes_divisible, GlobalDecomposition, InvariantTable, Place, RealSplitting,
    SimpleFactor,
};
pub use signature::{
    signature_classify, signature_classify_approx, ApproxForm, FormKind, HermitianForm,
    OrbitSignature,
};
