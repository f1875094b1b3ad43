//! Oracle-driven Shafarevich and Mordell loops and the arithmetic they need.

pub mod fixture;
pub mod mordell;
pub mod oracle;
pub mod shafarevich;
pub mod weil;

pub use fixture::FixtureOracles;
pub use mordell::run_mordell;
pub use oracle::{
    Descriptor, EnumOracle, FamilyOracle, FiberMatcher, IsogenyOracle, LiftOracle, LiftRequest,
    OracleSuite, ParameterPoint, PolarizedVariety,
};
pub use shafarevich::{run_shafarevich, EngineConfig, RunVerdict, ShafarevichRun, TraceEvent};
pub use weil::{
    decimal_digits, determines_traces_check, isogeny_degree_bound, precision_threshold,
    unique_weil_lift, weil_bound, weil_candidate_count, weil_candidates, CandidateState, PrimeSite,
    TraceCandidate, CANDIDATE_BUDGET,
};
