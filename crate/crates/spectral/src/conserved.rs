use dnls_core::hierarchy::hamiltonian_density;
use num_complex::Complex64;

use crate::evaluator::{Dealias, NonlinearEvaluator};
use crate::grid::{Field, Grid};

/// Index of the mass functional `∫ |u|²` among the monitors.
pub const MASS: i64 = -1;

/// `I_n = ∫ q Y_n dx` with `r = ū`, or the mass for `n = -1`.
#[derive(Clone, Debug)]
pub struct ConservedFunctional {
    n: i64,
    density: Option<NonlinearEvaluator>,
}

pub fn conserved_functional(n: i64, grid: Grid) -> ConservedFunctional {
    assert!(n >= MASS, "functional index {n} out of range");
    let density = (n >= 0).then(|| {
        NonlinearEvaluator::compile_any(&hamiltonian_density(n as usize), grid, Dealias::exact())
            .expect("exact products are a valid configuration")
    });
    ConservedFunctional { n, density }
}

impl ConservedFunctional {
    pub fn index(&self) -> i64 {
        self.n
    }

    /// Trapezoidal quadrature of the density over the period.
    pub fn evaluate(&mut self, f: &Field) -> Complex64 {
        match &mut self.density {
            None => Complex64::new(f.mass(), 0.0),
            Some(ev) => {
                let c = ev.eval_coefficients(&f.coefficients());
                c[0] * f.grid.length()
            }
        }
    }
}
