//! Shared inputs for the criterion benches.

use num_complex::Complex64;
use toolkit_core::analytic::CurveModel;
use toolkit_core::engine::{EngineConfig, PrimeSite};
use toolkit_core::exact::rational::rat;
use toolkit_core::heisenberg::{theta_null_fixture, DeltaType, ThetaNullVector};
use toolkit_core::{QPoly, StructuredAlgebra};

/// ℚ[x]/(x² − 5), whose maximal order at 2 is strictly larger than ℤ₂[x].
pub fn sqrt5() -> StructuredAlgebra {
    StructuredAlgebra::from_poly(&QPoly::from_ints(&[-5, 0, 1])).expect("x² − 5 is squarefree")
}

pub fn hamilton() -> StructuredAlgebra {
    StructuredAlgebra::quaternion(&rat(-1), &rat(-1))
}

/// y² = 4x³ − 4x.
pub fn lemniscatic() -> CurveModel {
    CurveModel::from_ints([0, -4, 0, 4]).expect("smooth cubic")
}

pub fn delta8() -> DeltaType {
    DeltaType::new(vec![8]).expect("valid type")
}

pub fn theta8() -> ThetaNullVector<Complex64> {
    theta_null_fixture(&delta8(), &[Complex64::new(0.3, 1.1)])
        .expect("τ in the upper half plane")
        .q
}

/// A run that never resolves, so every iteration does the full lift and match work.
pub fn engine_config(max_iterations: u64) -> EngineConfig {
    EngineConfig {
        g: 1,
        ell: 3,
        d: Some(1),
        sites: vec![
            PrimeSite::new("p5", 5).unwrap(),
            PrimeSite::new("p7", 7).unwrap(),
        ],
        extended_sites: vec![vec![PrimeSite::new("q11", 11).unwrap()]],
        bad_norms: vec![2],
        max_iterations,
        seed: 1,
        candidate_budget: None,
    }
}
