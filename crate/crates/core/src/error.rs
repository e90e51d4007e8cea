use thiserror::Error;

use crate::state::ValidationReport;

pub type Result<T, E = QcorrError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum QcorrError {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(ValidationReport),

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("dimensionless separation {x} below the collective-shift floor 1e-3")]
    SeparationTooSmall { x: f64 },

    #[error("step size {dt} failed the halving test twice (max change {change:.3e})")]
    StepSizeTooLarge { dt: f64, change: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("at {param} = {value}: {source}")]
    AtGridPoint {
        param: String,
        value: f64,
        #[source]
        source: Box<QcorrError>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl QcorrError {
    /// True for failures of the time integrator, as opposed to bad input.
    pub fn is_integrator_failure(&self) -> bool {
        match self {
            QcorrError::StepSizeTooLarge { .. } => true,
            QcorrError::AtGridPoint { source, .. } => source.is_integrator_failure(),
            _ => false,
        }
    }
}
