use alloc::string::String;

/// Errors raised anywhere in the core crate.
///
/// Every variant maps onto a stable, machine-parsable class name via
/// [`Error::class`]; the CLI prints that name and picks its exit code from it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("precision exhausted at {bits} bits: {context}")]
    PrecisionExhausted { bits: u32, context: String },

    #[error("q = {q} exceeds the brute-force scan cap {cap}")]
    CapExceeded { q: u64, cap: u64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("function is not nonincreasing and positive on (0, 1]: {0}")]
    NotMonotone(String),

    #[error("tail sum diverges (tau = {tau} <= 1/2)")]
    NonSummableTail { tau: f64 },

    #[error("dimension {dim} exceeds brute-force cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("block grid ends at {end} but frequency {needed} is required")]
    GridTooShort { end: u64, needed: u64 },

    #[error("sweep too short: {0}")]
    InsufficientSweep(String),

    #[error("rational approximant too coarse: delta_bar = {delta_bar} > 1")]
    ApproximantTooCoarse { delta_bar: f64 },

    #[error("internal assertion failed: {0}")]
    AssertionFailed(String),
}

impl Error {
    /// Stable class name of the error.
    pub fn class(&self) -> &'static str {
        match self {
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::PrecisionExhausted { .. } => "PrecisionExhausted",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::NotMonotone(_) => "NotMonotone",
            Error::NonSummableTail { .. } => "NonSummableTail",
            Error::DimensionCap { .. } => "DimensionCap",
            Error::GridTooShort { .. } => "GridTooShort",
            Error::InsufficientSweep(_) => "InsufficientSweep",
            Error::ApproximantTooCoarse { .. } => "ApproximantTooCoarse",
            Error::AssertionFailed(_) => "AssertionFailed",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidSpec(msg.into())
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::HypothesisViolated(msg.into())
    }

    pub(crate) fn assertion(msg: impl Into<String>) -> Self {
        Error::AssertionFailed(msg.into())
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
