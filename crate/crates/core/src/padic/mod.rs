//! ℓ-adic structure of semisimple algebras: orders, étale splitting, local invariants.

pub mod etale;
pub mod invariant;
pub mod lattice;
pub mod order;

pub use etale::{check_splitting, split_etale, ApproxIdempotent, EtaleSplitting};
pub use invariant::{
    central_idempotents, decompose_module, local_decomposition, local_invariant, LocalInvariant,
    ModuleComponent,
};
pub use lattice::LocalLattice;
pub use order::{is_maximal, is_order, maximal_order, maximal_order_at, seed_order, LocalOrder};
