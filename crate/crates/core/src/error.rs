use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("malformed CSR structure: {0}")]
    MalformedMatrix(String),

    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },

    #[error("matrix is not Hermitian at ({row}, {col})")]
    NotHermitian { row: usize, col: usize },

    #[error("vector must be normalized, got norm {norm}")]
    NotNormalized { norm: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("step size collapsed to {t_step:e} with {t_remaining} left to evolve (Krylov dimension too small or error budget unattainable)")]
    StepCollapse { t_step: f64, t_remaining: f64 },

    #[error("integrand is not finite at x = {x}")]
    IntegrationFailure { x: f64 },

    #[error("infeasible sector: {0}")]
    InfeasibleSector(String),

    #[error("basis dimension exceeds the addressable range")]
    Capacity,

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("state {0:?} is not part of the basis")]
    StateNotInBasis(Vec<u32>),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
