//! Numerical uniformization of elliptic curves with exact integer outputs: period lattices,
//! homology actions, polarizations, torsion and Frobenius traces.

pub mod arith;
pub mod complex;
pub mod curve;
pub mod elliptic;
pub mod homology;
pub mod periods;

pub use arith::{
    frobenius_trace, recognize_rational, torsion_points, weil_bound_holds, TorsionPoint,
};
pub use complex::Cx;
pub use curve::{invariant_differentials, CurveModel, Differential};
pub use elliptic::{
    exp_ball, exp_point, local_invert, log_point, AnalyticMap, ChartData, ExpBall, Inversion,
    PolynomialMap, ProjPoint, Uniformizer,
};
pub use homology::{
    chern_class, endomorphism_ring, homology_action, polarized_automorphisms, ChernClass, Compose,
    EndomorphismRing, GaussPoly, HomologyAction, IntMat, Morphism, MulBy, PolyMorphism,
};
pub use periods::{log_point_global, period_lattice, reduce_tau, PeriodLattice};
