use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("input must be sorted nonincreasing (entry {index} exceeds its predecessor)")]
    Unsorted { index: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    Trace { trace: f64 },

    #[error("state is not normalized (norm^2 = {norm_sq})")]
    Normalization { norm_sq: f64 },

    #[error("invalid subsystem selection: {0}")]
    Subsystems(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("unknown catalog state `{0}`")]
    UnknownCatalog(String),

    #[error("state file: {0}")]
    StateFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
