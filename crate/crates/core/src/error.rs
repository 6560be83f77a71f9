use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero input to {0}")]
    ZeroInput(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient field mismatch")]
    FieldMismatch,
    #[error("kernel is infinite")]
    InfiniteKernel,
    #[error("operation needs a perfect coefficient field: {0}")]
    NotPerfect(&'static str),
    #[error("operation needs a finite coefficient field")]
    NotFinite,
    #[error("search bound exhausted: {0}")]
    Bound(String),
    #[error("element is not integral (not in the maximal order)")]
    NonIntegral,
    #[error("matrix is not a unit")]
    NotUnit,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
