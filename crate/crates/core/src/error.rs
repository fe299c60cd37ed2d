use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A^dagger| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not unitary (max |A^dagger A - I| = {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("qubit index {index} out of range for a {n}-qubit register")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("coupling pair requires k < l, got ({k}, {l})")]
    RequireKLessL { k: usize, l: usize },

    #[error("unknown encoding label {0:?}")]
    UnknownLabel(String),

    #[error("invalid time interval [{t0}, {t1}]")]
    InvalidInterval { t0: f64, t1: f64 },

    #[error("pulse schedule mismatch: {0}")]
    ScheduleMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
