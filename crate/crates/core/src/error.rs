use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix data is not square: expected {expected} entries, got {got}")]
    NotSquare { expected: usize, got: usize },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: ||M - M*||_F = {deviation:e} exceeds {bound:e}")]
    NotHermitian { deviation: f64, bound: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("rank {rank} out of range 1..={dim}")]
    RankOutOfRange { rank: usize, dim: usize },

    #[error("spectrum lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("log-majorization requires nonnegative entries, found {0}")]
    NegativeEntry(f64),

    #[error("spectrum is not sorted nonincreasing at index {0}")]
    Unsorted(usize),

    #[error("projection is not a top-{rank} Ky Fan maximizer: Tr(EF) = {trace}, expected {expected}")]
    NotKyFanMaximizer { rank: usize, trace: f64, expected: f64 },

    #[error("order {k} unsupported: {reason}")]
    UnsupportedOrder { k: usize, reason: &'static str },

    #[error("negative decomposition coefficient c_{index} = {value}")]
    NegativeCoefficient { index: usize, value: f64 },

    #[error("alphabet mismatch: {0:?} vs {1:?}")]
    AlphabetMismatch(crate::symbolic::Alphabet, crate::symbolic::Alphabet),

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed report: {0}")]
    MalformedReport(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
