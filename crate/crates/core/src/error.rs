use thiserror::Error;

/// Errors produced by the coding, protocol and simulation layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime in [2, 2^32)")]
    NotPrime(u64),
    #[error("no inverse of zero")]
    NoInverse,
    #[error("evaluation points not distinct")]
    DuplicatePoints,
    #[error("interpolation needs at least one point")]
    NoPoints,
    #[error("column multiplier at position {0} is zero")]
    ZeroMultiplier(usize),
    #[error("invalid code parameters: {0}")]
    InvalidCode(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(u64, u64),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("evaluation vectors differ")]
    AlphaMismatch,
    #[error("decoding failure")]
    DecodingFailure,
    #[error("ambiguous: several codewords are equally close")]
    Ambiguous,
    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("star code condition violated: {0}")]
    ConditionViolated(String),
    #[error("file index {index} out of range 1..={m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("retrieval failed: adversary budget exceeded")]
    RetrievalFailed,
    #[error("privacy audit failed for server subset {0:?}")]
    AuditFailed(Vec<usize>),
    #[error("singular matrix")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
