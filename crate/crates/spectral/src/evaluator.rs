use dnls_core::{DiffPoly, Factor, Var};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::SpectralError;
use crate::grid::{Field, Grid, Transform};

/// Mode truncation at `fraction · M/2` applied to inputs and outputs, with products
/// formed on a grid `padding` times finer. `padding = 0` picks the smallest power of two
/// that makes every product of the compiled polynomial alias-free.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dealias {
    pub fraction: f64,
    pub padding: usize,
}

impl Default for Dealias {
    fn default() -> Self {
        Self {
            fraction: 2.0 / 3.0,
            padding: 0,
        }
    }
}

impl Dealias {
    /// Plain collocation: every mode kept, products aliased modulo `M`.
    pub fn off() -> Self {
        Self {
            fraction: 1.0,
            padding: 1,
        }
    }

    /// Every mode kept, products formed exactly.
    pub fn exact() -> Self {
        Self {
            fraction: 1.0,
            padding: 0,
        }
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return Err(SpectralError::Config(format!("invalid dealiasing {self:?}")));
        }
        Ok(())
    }

    /// Largest retained `|mode|`; the unpaired Nyquist mode is always dropped.
    pub fn cutoff(&self, points: usize) -> i64 {
        let half = (points / 2) as i64;
        ((self.fraction * half as f64 + 1e-9).floor() as i64).min(half - 1)
    }

    /// Padding that keeps degree-`degree` products of modes `|k| ≤ cutoff` from aliasing
    /// back onto retained modes.
    pub fn resolved_padding(&self, points: usize, degree: usize) -> usize {
        if self.padding > 0 {
            return self.padding;
        }
        let need = (degree.max(1) as i64 + 1) * self.cutoff(points) + 1;
        let mut p = 1;
        while ((p * points) as i64) < need {
            p *= 2;
        }
        p
    }
}

pub fn to_complex(c: &dnls_core::GaussianRational) -> Complex64 {
    let (re, im) = c.to_f64_pair();
    Complex64::new(re, im)
}

/// Compiled pointwise evaluator for a differential polynomial in `u` (`q`) and `ū` (`r`).
#[derive(Clone, Debug)]
pub struct NonlinearEvaluator {
    grid: Grid,
    dealias: Dealias,
    factors: Vec<Factor>,
    terms: Vec<(Complex64, Vec<(usize, u32)>)>,
    small: Transform,
    big: Transform,
}

/// Requires every monomial to carry one more `u` than `ū`.
pub fn compile_evaluator(nl: &DiffPoly, grid: Grid, dealias: Dealias) -> Result<NonlinearEvaluator, SpectralError> {
    if let Some((m, _)) = nl.terms().find(|(m, _)| !m.is_phase_balanced()) {
        return Err(SpectralError::PhaseImbalance(m.to_string()));
    }
    NonlinearEvaluator::compile_any(nl, grid, dealias)
}

impl NonlinearEvaluator {
    /// Compiles without the phase-balance precondition (used for conserved densities).
    pub fn compile_any(p: &DiffPoly, grid: Grid, dealias: Dealias) -> Result<Self, SpectralError> {
        dealias.validate()?;
        let degree = p.terms().map(|(m, _)| m.degree()).max().unwrap_or(1);
        let dealias = Dealias {
            padding: dealias.resolved_padding(grid.points(), degree),
            ..dealias
        };
        let mut factors: Vec<Factor> = Vec::new();
        let mut terms = Vec::new();
        for (m, c) in p.terms() {
            let mut powers = Vec::new();
            for (f, k) in m.grouped() {
                let idx = match factors.iter().position(|&g| g == f) {
                    Some(i) => i,
                    None => {
                        factors.push(f);
                        factors.len() - 1
                    }
                };
                powers.push((idx, k as u32));
            }
            terms.push((to_complex(c), powers));
        }
        Ok(Self {
            grid,
            dealias,
            factors,
            terms,
            small: Transform::new(grid.points()),
            big: Transform::new(grid.points() * dealias.padding),
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn dealias(&self) -> Dealias {
        self.dealias
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficients in, coefficients out (FFT layout on the base grid).
    pub fn eval_coefficients(&mut self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let m = self.grid.points();
        let zero = Complex64::new(0.0, 0.0);
        if self.terms.is_empty() {
            return vec![zero; m];
        }
        let big_n = self.big.len();
        let cutoff = self.dealias.cutoff(m);
        let big_slot = |mode: i64| mode.rem_euclid(big_n as i64) as usize;
        let mut fields = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            let mut buf = vec![zero; big_n];
            for (k, c) in coeffs.iter().enumerate() {
                let mode = self.grid.mode(k);
                if mode.abs() > cutoff {
                    continue;
                }
                let ik = Complex64::new(0.0, self.grid.wavenumber(k));
                buf[big_slot(mode)] = c * ik.powu(f.order);
            }
            self.big.inverse(&mut buf);
            if f.var == Var::R {
                buf.iter_mut().for_each(|z| *z = z.conj());
            }
            fields.push(buf);
        }
        let mut prod = vec![zero; big_n];
        for (c, powers) in &self.terms {
            for (i, p) in prod.iter_mut().enumerate() {
                let mut v = *c;
                for &(idx, e) in powers {
                    v *= fields[idx][i].powu(e);
                }
                *p += v;
            }
        }
        self.big.forward(&mut prod);
        (0..m)
            .map(|k| {
                let mode = self.grid.mode(k);
                if mode.abs() > cutoff {
                    zero
                } else {
                    prod[big_slot(mode)]
                }
            })
            .collect()
    }

    /// Pointwise samples of the polynomial (no output truncation beyond the configured one).
    pub fn eval(&mut self, f: &Field) -> Field {
        let mut c = f.samples.clone();
        self.small.forward(&mut c);
        let mut out = self.eval_coefficients(&c);
        self.small.inverse(&mut out);
        Field {
            grid: f.grid,
            samples: out,
            time: f.time,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dnls_core::GaussianRational;

    #[test]
    fn zero_polynomial_gives_zero() {
        let g = Grid::periodic(32).unwrap();
        let mut ev = compile_evaluator(&DiffPoly::zero(), g, Dealias::default()).unwrap();
        let f = Field::from_fn(g, |x| Complex64::new(x.cos(), 0.0));
        assert!(ev.eval(&f).max_abs() == 0.0);
    }

    #[test]
    fn dnls_single_mode() {
        // i ∂_x(u² ū) on A e^{iNx} is -N |A|² A e^{iNx}
        let g = Grid::periodic(64).unwrap();
        let nl = (&DiffPoly::q(0).pow(2) * &DiffPoly::r(0)).dx().scale(&GaussianRational::i());
        let mut ev = compile_evaluator(&nl, g, Dealias::default()).unwrap();
        let a = Complex64::new(0.6, -0.3);
        let n = 5.0;
        let f = Field::from_fn(g, |x| a * Complex64::new(0.0, n * x).exp());
        let out = ev.eval(&f);
        let expect = Field::from_fn(g, |x| -n * a.norm_sqr() * a * Complex64::new(0.0, n * x).exp());
        assert!(out.l2_distance(&expect) < 1e-12);
    }

    #[test]
    fn rejects_unbalanced() {
        let g = Grid::periodic(16).unwrap();
        let p = &DiffPoly::q(0) * &DiffPoly::r(0);
        assert!(compile_evaluator(&p, g, Dealias::default()).is_err());
        assert!(NonlinearEvaluator::compile_any(&p, g, Dealias::default()).is_ok());
    }
}
