use thiserror::Error;

/// Errors produced by geometric, transport and barycenter computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("point does not belong to {space}: {reason}")]
    InvalidPoint { space: String, reason: String },

    #[error("invalid tangent vector: {0}")]
    InvalidTangent(String),

    #[error("space mismatch: {0} vs {1}")]
    SpaceMismatch(String, String),

    #[error("minimizing geodesic between {from:?} and {to:?} is not unique (cut locus)")]
    CutLocus { from: Vec<f64>, to: Vec<f64> },

    #[error("geodesic direction at the gluing point is ambiguous: {0}")]
    BranchAmbiguity(String),

    #[error("geodesic leaves the space: {0}")]
    OutOfSpace(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("measure has {count} atoms, above the limit of {limit}")]
    TooManyAtoms { count: usize, limit: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("malformed isometry: {0}")]
    MalformedIsometry(String),

    #[error("group closure exceeded {0} elements")]
    GroupTooLarge(usize),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = core::result::Result<T, Error>;
