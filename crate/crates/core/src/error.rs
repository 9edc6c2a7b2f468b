use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("malformed coefficient `{0}`")]
    Coefficient(String),
    #[error("malformed factor `{0}`")]
    Factor(String),
    #[error("malformed polynomial: {0}")]
    Poly(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("Y_{n} violates item {item}: {detail}")]
    PropertyViolation { n: usize, item: u8, detail: String },
    #[error("linear coefficient {found} contradicts the canonical form: {detail}")]
    NormalizationMismatch { found: String, detail: String },
    #[error("not an exact derivative; unreachable component: {component}")]
    NotExact { component: String },
    #[error("monomial `{monomial}` is not phase-balanced")]
    PhaseImbalance { monomial: String },
    #[error("bad cubic terms survived the gauge transformation: {coefficients}")]
    ResidualBadCubic { coefficients: String },
    #[error("{0}")]
    Precondition(String),
}
