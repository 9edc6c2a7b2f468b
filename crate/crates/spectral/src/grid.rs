use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::SpectralError;

/// Uniform periodic grid on `[0, L)` with `M` points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    points: usize,
    length: f64,
}

impl Grid {
    pub fn new(points: usize, length: f64) -> Result<Self, SpectralError> {
        if points < 16 || !points.is_power_of_two() {
            return Err(SpectralError::Config(format!(
                "grid size {points} must be a power of two >= 16"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(SpectralError::Config(format!("grid length {length} must be positive")));
        }
        Ok(Self { points, length })
    }

    pub fn periodic(points: usize) -> Result<Self, SpectralError> {
        Self::new(points, 2.0 * PI)
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.points as f64
    }

    /// Frequency spacing `2π/L`.
    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.length
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    /// Integer mode index of FFT slot `k`: `0, 1, …, M/2-1, -M/2, …, -1`.
    pub fn mode(&self, k: usize) -> i64 {
        let m = self.points as i64;
        let k = k as i64;
        if k < m / 2 {
            k
        } else {
            k - m
        }
    }

    pub fn slot(&self, mode: i64) -> usize {
        mode.rem_euclid(self.points as i64) as usize
    }

    pub fn wavenumber(&self, k: usize) -> f64 {
        self.mode(k) as f64 * self.dxi()
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.points).map(|k| self.wavenumber(k)).collect()
    }
}

/// Forward/inverse transforms with the coefficient convention `c_k = (1/M) Σ u_j e^{-iξ_k x_j}`.
#[derive(Clone)]
pub struct Transform {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl Transform {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let len = fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len());
        Self {
            n,
            fwd,
            inv,
            scratch: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Samples to coefficients, in place.
    pub fn forward(&mut self, buf: &mut [Complex64]) {
        self.fwd.process_with_scratch(buf, &mut self.scratch);
        let s = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|v| *v *= s);
    }

    /// Coefficients to samples, in place.
    pub fn inverse(&mut self, buf: &mut [Complex64]) {
        self.inv.process_with_scratch(buf, &mut self.scratch);
    }
}

impl std::fmt::Debug for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transform").field("n", &self.n).finish()
    }
}

/// Complex samples on a grid at a given time.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub samples: Vec<Complex64>,
    pub time: f64,
}

impl Field {
    pub fn new(grid: Grid, samples: Vec<Complex64>, time: f64) -> Result<Self, SpectralError> {
        if samples.len() != grid.points() {
            return Err(SpectralError::Config(format!(
                "{} samples for a {}-point grid",
                samples.len(),
                grid.points()
            )));
        }
        Ok(Self { grid, samples, time })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            samples: vec![Complex64::new(0.0, 0.0); grid.points()],
            time: 0.0,
        }
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Grid, f: F) -> Self {
        Self {
            grid,
            samples: (0..grid.points()).map(|i| f(grid.x(i))).collect(),
            time: 0.0,
        }
    }

    /// Builds a field from Fourier coefficients in FFT layout.
    pub fn from_coefficients(grid: Grid, coeffs: &[Complex64]) -> Self {
        let mut buf = coeffs.to_vec();
        Transform::new(grid.points()).inverse(&mut buf);
        Self {
            grid,
            samples: buf,
            time: 0.0,
        }
    }

    pub fn coefficients(&self) -> Vec<Complex64> {
        let mut buf = self.samples.clone();
        Transform::new(self.grid.points()).forward(&mut buf);
        buf
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `∫ |u|² dx` by the trapezoidal rule.
    pub fn mass(&self) -> f64 {
        self.grid.dx() * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.mass().sqrt()
    }

    pub fn l2_distance(&self, other: &Field) -> f64 {
        let s: f64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (self.grid.dx() * s).sqrt()
    }

    /// `‖self - other‖ / ‖other‖`.
    pub fn relative_l2_error(&self, reference: &Field) -> f64 {
        self.l2_distance(reference) / reference.l2_norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}
