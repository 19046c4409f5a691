use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("family is not irreducible")]
    NotIrreducible,

    #[error("power iteration did not converge after {iterations} iterations (last change {last_change:e})")]
    NoConvergence { iterations: usize, last_change: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed DIMACS input at line {line}: {msg}")]
    Dimacs { line: usize, msg: String },

    #[error("construction error: {0}")]
    Construction(String),

    #[error("witness rejected: {0}")]
    WitnessRejected(String),

    #[error("assignment does not satisfy clause {clause} (residual on operator {operator})")]
    UnsatisfiedClause { clause: usize, operator: usize },

    #[error("{what} exceeds cap: {value} > {cap}")]
    OverCap {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_mismatch(expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
