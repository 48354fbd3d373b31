use alloc::string::String;

/// Errors raised by the symbolic and numeric engines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("unknown coordinate: {0}")]
    UnknownCoordinate(String),
    #[error("objects live on different charts")]
    ChartMismatch,
    #[error("map has {found} components, target chart needs {expected}")]
    ComponentCount { expected: usize, found: usize },
    #[error("connection is not adapted to the polarisation: {0}")]
    NotAdapted(String),
    #[error("deformation inconsistent with case: {0}")]
    InconsistentDeformation(String),
    #[error("oscillatory integral is not defined: {0}")]
    NonIntegrable(String),
    #[error("coefficient singular at q = {q}: 1 + 2q^n = {value}")]
    Singular { q: f64, value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("tridiagonal solve failed at row {0}")]
    SolveFailed(usize),
}
