//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by constructors, validators, and measurement operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator is not Hermitian (deviation {deviation:.3e}, tolerance {tol:.3e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("operator is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not an isometry (‖V†V − 1‖ = {deviation:.3e})")]
    NotIsometry { deviation: f64 },

    #[error("matrix is not unitary (‖U†U − 1‖ = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("invalid POM: {0}")]
    InvalidPom(String),

    #[error("invalid instrument: {0}")]
    InvalidInstrument(String),

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("unknown outcome label {0}")]
    UnknownOutcome(f64),

    #[error("meters {i} and {j} do not commute (‖[M_i, M_j]‖ = {deviation:.3e})")]
    NonCommutingMeters { i: usize, j: usize, deviation: f64 },

    #[error("POM is not compatible with the observable (max commutator norm {deviation:.3e})")]
    NotCompatible { deviation: f64 },

    #[error("POM is biased for the observable (‖X̂ − Â‖ = {deviation:.3e})")]
    Biased { deviation: f64 },

    #[error("probe state is not pure (largest eigenvalue {0:.6})")]
    MixedProbe(f64),

    #[error("no posterior state at outcome {0} (probability below floor)")]
    NullPosterior(f64),

    #[error("negative joint probability mass {0:.3e} exceeds tolerance")]
    NegativeMass(f64),

    #[error("measurement times must be non-negative and non-decreasing")]
    DecreasingTimes,

    #[error("invalid model parameter: {0}")]
    InvalidModel(String),

    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for a [`Error::Config`] with a field path.
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { path: path.into(), message: message.into() }
    }

    /// True for errors caused by bad user input rather than internal
    /// failures. Everything reachable from a config file counts as input;
    /// only [`Error::Scenario`] marks an internal inconsistency.
    pub fn is_invalid_input(&self) -> bool {
        !matches!(self, Error::Scenario(_))
    }
}
