//! Error type shared by the whole crate.

/// Everything that can go wrong in the numerical layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (defect {defect:.3e} exceeds tolerance {tol:.1e})")]
    NonHermitian { defect: f64, tol: f64 },

    #[error("cannot normalize a vector with zero norm")]
    ZeroNorm,

    #[error("factorization failed: {0}")]
    FactorizationError(&'static str),

    #[error("eigendecomposition failed: {0}")]
    EigenFailure(&'static str),

    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("conditioning observable has numerically zero variance ({0:.3e})")]
    ZeroVariance(f64),

    #[error("invalid magnetic quantum number m2={m2} for j2={j2}")]
    InvalidM { j2: u32, m2: i32 },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("search made no feasible progress: {0}")]
    NoProgress(String),
}

pub type Result<T> = std::result::Result<T, Error>;
