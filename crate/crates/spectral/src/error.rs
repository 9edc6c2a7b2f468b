use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("non-finite samples at t = {time}")]
    BlowupDetected { time: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("monomial `{0}` is not phase-balanced")]
    PhaseImbalance(String),
    #[error("malformed snapshot: {0}")]
    Snapshot(String),
}
