use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation orders differ: {0} vs {1}")]
    TruncationMismatch(usize, usize),

    #[error("leading coefficient is not a unit")]
    NotAUnit,

    #[error("element is not h-integral: nonzero coefficient at order {order}{at}")]
    NonIntegral { order: i64, at: String },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("{0}")]
    Semantic(String),

    #[error("schouten bracket of degrees ({0}, {1}) is not supported")]
    DegreeUnsupported(usize, usize),

    #[error("order-zero part of {0} is not plain multiplication")]
    TriangularityViolation(String),

    #[error("truncation insufficient: {0}")]
    TruncationInsufficient(String),

    #[error("functionals of different flavors cannot be combined")]
    FlavorMismatch,

    #[error("size guard tripped: {0}")]
    Guard(String),
}

pub type Result<T> = std::result::Result<T, Error>;
