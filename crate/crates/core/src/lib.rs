//! Exact algebra for the dNLS hierarchy: Gaussian-rational differential polynomials,
//! the recursion for the conserved densities, hierarchy equations and the gauge transform.

pub mod error;
pub mod gauge;
pub mod golden;
pub mod hierarchy;
pub mod latex;
pub mod poly;
pub mod rational;

pub use error::{AlgebraError, ParseError};
pub use gauge::{antiderivative, derive_gauged, is_gauged_form, phase_time_derivative, twist_substitute, Direction, GaugeDerivation};
pub use hierarchy::{
    build_hierarchy_equation, check_y_properties, compute_y, extract_bad_cubics, predicted_bad_cubic_coefficient,
    variational_derivative, Equation, LinearPart, Parity,
};
pub use poly::{DiffPoly, Factor, Monomial, Var};
pub use rational::GaussianRational;
