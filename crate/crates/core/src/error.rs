use thiserror::Error;

/// Errors raised by graph, colouring, cover and region operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("colouring is not balanced: {red} red vertices out of {n}")]
    Unbalanced { red: usize, n: usize },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("predicate period {period} does not divide torus side {k}")]
    Seam { period: u64, k: u64 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
