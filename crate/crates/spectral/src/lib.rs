//! Pseudo-spectral solver for `i u_t + (-1)^{j+1} ∂^{2j} u = N(u)` on a periodic grid.

pub mod conserved;
pub mod error;
pub mod evaluator;
pub mod grid;
pub mod integrate;
pub mod io;
pub mod plane_wave;

pub use conserved::{conserved_functional, ConservedFunctional, MASS};
pub use error::SpectralError;
pub use evaluator::{compile_evaluator, Dealias, NonlinearEvaluator};
pub use grid::{Field, Grid, Transform};
pub use integrate::{linear_propagate, simulate, simulate_with_reference, Integrator, MonitorSample, SimConfig, Trajectory};
pub use io::{read_snapshot, write_monitor_csv, write_snapshot};
pub use plane_wave::{plane_wave_nonlinearity, plane_wave_reference, plane_wave_sign};
