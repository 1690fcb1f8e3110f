use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow while evaluating {0}")]
    Overflow(String),

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("invalid energy: {0}")]
    InvalidEnergy(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// The spectral relation has no admissible root, or the state has
    /// dissolved into the continuum.
    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}
