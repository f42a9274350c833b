use thiserror::Error;

/// Errors raised by model construction and the computations built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cone generators are linearly dependent")]
    DegenerateCone,
    #[error("flag is not increasing at level {0}")]
    FlagNotIncreasing(usize),
    #[error("polytope is not simple at vertex {0}")]
    NotSimple(String),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("facet normal {0} is not primitive")]
    NonPrimitiveNormal(usize),
    #[error("polytope has empty interior")]
    EmptyInterior,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("point {0} is not in the interior of the polytope")]
    PointNotInterior(String),
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("coordinate {0} is zero")]
    ZeroCoordinate(usize),
    #[error("bulk exponent for sector {0} is not positive")]
    NonPositiveBulkExponent(usize),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("generators with finite energy do not span")]
    SpanNeverFull,
    #[error("scenario count {0} exceeds the limit")]
    TooManyScenarios(u128),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unbound symbol {0}")]
    UnboundSymbol(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
