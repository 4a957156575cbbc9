use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("configurations belong to different spaces")]
    SpaceMismatch,

    #[error("configuration has no points")]
    EmptyConfiguration,

    #[error("configuration of {size} points exceeds cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("invalid track: {0}")]
    InvalidTrack(String),

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("ambiguous lift: step of length {step} is at least half the circumference")]
    AmbiguousLift { step: f64 },

    #[error("loop is not closed (lift displacement {0} is not an integer number of turns)")]
    OpenLoop(f64),

    #[error("ambiguous branching: {0}")]
    AmbiguousBranching(String),

    #[error("unsupported degree {0}: only a single turn (+1 or -1) can be contracted directly")]
    UnsupportedDegree(i64),

    #[error("mode violation: maximum cardinality {observed} exceeds the mode cap {cap}")]
    ModeViolation { observed: usize, cap: usize },

    #[error("invalid mode: {0}")]
    InvalidMode(String),

    #[error("simplex count {count} exceeds budget {budget}; subsample the cloud")]
    SizeLimit { count: usize, budget: usize },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
