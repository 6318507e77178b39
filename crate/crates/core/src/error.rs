use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field order {p}^{e} is outside the supported range 2..=16")]
    FieldOutOfRange { p: u32, e: u32 },
    #[error("field order {order} is not the square of {sub_order}")]
    NotASquare { order: usize, sub_order: usize },
    #[error("ragged matrix: row {row} has length {len}, expected {expected}")]
    RaggedMatrix { row: usize, len: usize, expected: usize },
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operation not defined for this form kind: {0}")]
    KindMismatch(&'static str),
    #[error("form is degenerate")]
    Degenerate,
    #[error("witt index {0} is too small to carry lines")]
    NoLines(usize),
    #[error("subspace is not singular")]
    NotSingular,
    #[error("points {0} and {1} are collinear")]
    Collinear(usize, usize),
    #[error("the glue subspace A meets W")]
    MeetsOther,
    #[error("subspace is not contained in the residue carrier")]
    NotInResidue,
}

pub type Result<T> = std::result::Result<T, Error>;
