use thiserror::Error;

/// Every failure mode of the library. Variants are grouped by the layer that
/// raises them, but all of them travel through the same `Result`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("the zero series has no order")]
    ZeroHasNoOrder,

    /// A zero test could not be decided at the available precision.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("order {order} is not divisible by {n}; no {n}-th root exists")]
    NoRoot { order: i64, n: u32 },

    #[error("leading coefficient {coeff} has no exact {n}-th root in Q(i)")]
    RootNotRepresentable { coeff: String, n: u32 },

    #[error("scaling parameter must be nonzero")]
    ZeroScale,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is singular")]
    Singular,

    #[error("element is not nilpotent: {0}")]
    NotNilpotent(String),

    #[error("derivation component requires a determinant-one group element")]
    CertifiedDetWithDerivation,

    #[error("matrix is not traceless")]
    NotTraceless,

    #[error("determinant order {order} is not a multiple of {n}")]
    NotInGroup { order: i64, n: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("shift {k} out of range 0..{smallest}")]
    InvalidShift { k: i64, smallest: usize },

    #[error("block shapes differ: {0:?} vs {1:?}")]
    ShapeMismatch(Vec<usize>, Vec<usize>),

    #[error("quasi-Jordan forms are not conjugate: multiplicity orders differ by {diff}, not a multiple of {modulus}")]
    NotConjugate { diff: i64, modulus: usize },

    /// An internal verification by multiplication failed. Indicates a bug.
    #[error("internal verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn exhausted(what: impl Into<String>) -> Error {
    Error::PrecisionExhausted(what.into())
}
