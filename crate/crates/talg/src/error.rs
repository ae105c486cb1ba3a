use thiserror::Error;

/// Errors raised by t-algebra operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum TalgError {
    /// A mode size of zero (or another malformed dimension) was supplied.
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    /// Two operands live over different t-scalar shapes.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// Row/column counts do not conform.
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    /// An operation restricted to self-conjugate or nonnegative inputs was
    /// given an operand outside its domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Multiplicative inversion hit spectral entries with magnitude below the
    /// cone tolerance. Slice indices are 1-based.
    #[error("singular t-scalar: dead spectral slices {0:?}")]
    SingularSlices(Vec<usize>),
    /// A requested rank exceeds what the operand can carry.
    #[error("rank too large: {0}")]
    RankTooLarge(String),
    /// Index outside `1..=K` (or another enumerated range).
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    /// Fewer samples than an algorithm needs.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// An underlying numerical routine failed to converge.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, TalgError>;
