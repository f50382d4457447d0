use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown graph family {0:?}")]
    UnknownFamily(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("malformed graph6: {0}")]
    Graph6(String),

    #[error("graph has {n} vertices, limit is {limit}")]
    SizeLimit { n: usize, limit: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("p must be positive, got {0}")]
    NonPositiveExponent(f64),

    #[error("variation ratio undefined for a constant function")]
    ConstantFunction,

    #[error("function has {got} values but graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("vertex enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("instance violates its invariants: {0}")]
    Domain(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
