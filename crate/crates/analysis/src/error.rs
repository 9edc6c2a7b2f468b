use dnls_core::AlgebraError;
use dnls_spectral::SpectralError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("field does not decay at the left boundary (max |u| = {max:e} on the first points)")]
    BoundaryDecayViolation { max: f64 },
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("degenerate fit: {0}")]
    FitDegenerate(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
