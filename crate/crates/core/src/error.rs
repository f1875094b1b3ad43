use thiserror::Error;

/// Domain errors raised by the toolkit operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("insufficient radius: {0}")]
    InsufficientRadius(String),
    #[error("structure constants not closed: {0}")]
    NotClosed(String),
    #[error("trace form is degenerate")]
    DegenerateTraceForm,
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("algebra is not etale: {0}")]
    NotEtale(String),
    #[error("precision too low: {0}")]
    PrecisionTooLow(String),
    #[error("representation is not an algebra homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("algebra is not semisimple")]
    NotSemisimple,
    #[error("unexpected signature ({0}, {1})")]
    UnexpectedSignature(usize, usize),
    #[error("sign could not be certified at the current precision")]
    SignUncertain,
    #[error("model is not smooth at the origin: {0}")]
    NotSmoothAtOrigin(String),
    #[error("target outside the contraction domain")]
    OutOfDomain,
    #[error("contraction estimate violated: {0}")]
    ContractionViolated(String),
    #[error("point outside the chart")]
    OutOfChart,
    #[error("precision failure; retry with at least {required_bits} bits")]
    PrecisionFailure { required_bits: u32 },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("rounding not certified (distance {0:.3e} to nearest integer)")]
    RoundingUncertain(f64),
    #[error("algebraic recognition failed: {0}")]
    RecognitionFailed(String),
    #[error("bad reduction at {0}")]
    BadReduction(u64),
    #[error("delta types differ")]
    DeltaMismatch,
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("root choice violates the lifting condition: {0}")]
    BadRootChoice(String),
    #[error("intertwining system has no nonzero solution")]
    NoSolution,
    #[error("incomplete input: missing {0:?}")]
    IncompleteInput(Vec<String>),
    #[error("candidate set too large: {0}")]
    CandidateSetTooLarge(String),
    #[error("modulus {modulus} does not exceed twice the bound {bound}")]
    AmbiguousRegime { modulus: String, bound: String },
    #[error("oracle contract violation: {0}")]
    OracleContractViolation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
