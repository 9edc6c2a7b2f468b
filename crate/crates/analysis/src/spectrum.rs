use std::f64::consts::PI;

use dnls_spectral::{Field, Grid};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::AnalysisError;

/// Samples `û(ξ_k)` of the unitary Fourier transform `û(ξ) = (2π)^{-1/2} ∫ u e^{-iξx} dx`
/// on the lattice `ξ_k = (start + k) Δξ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub dxi: f64,
    pub start: i64,
    pub values: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(dxi: f64, start: i64, values: Vec<Complex64>) -> Self {
        Self { dxi, start, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn frequency(&self, k: usize) -> f64 {
        (self.start + k as i64) as f64 * self.dxi
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.values.iter().enumerate().map(|(k, v)| (self.frequency(k), *v))
    }

    /// Grid modes `-M/2, …, M/2-1` in ascending order, `û_k = L c_k / √(2π)`.
    pub fn from_field(f: &Field) -> Self {
        let g = f.grid;
        let m = g.points() as i64;
        let c = f.coefficients();
        let scale = g.length() / (2.0 * PI).sqrt();
        let values = (-m / 2..m / 2).map(|mode| c[g.slot(mode)] * scale).collect();
        Self {
            dxi: g.dxi(),
            start: -m / 2,
            values,
        }
    }

    /// Inverse of [`Spectrum::from_field`]; the lattice must match the grid's modes.
    pub fn to_field(&self, grid: Grid) -> Result<Field, AnalysisError> {
        if ((self.dxi - grid.dxi()) / grid.dxi()).abs() > 1e-12 {
            return Err(AnalysisError::Resolution(format!(
                "lattice spacing {} does not match grid spacing {}",
                self.dxi,
                grid.dxi()
            )));
        }
        let half = grid.points() as i64 / 2;
        let end = self.start + self.values.len() as i64;
        if self.start < -half || end > half {
            return Err(AnalysisError::Resolution(format!(
                "modes {}..{} exceed the grid band -{half}..{half}",
                self.start, end
            )));
        }
        let scale = (2.0 * PI).sqrt() / grid.length();
        let mut c = vec![Complex64::new(0.0, 0.0); grid.points()];
        for (k, v) in self.values.iter().enumerate() {
            c[grid.slot(self.start + k as i64)] = v * scale;
        }
        Ok(Field::from_coefficients(grid, &c))
    }

    /// `(Σ Δξ |û|²)^{1/2}`, the L² norm by Plancherel.
    pub fn l2_norm(&self) -> f64 {
        (self.dxi * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }
}
