use dnls_core::Direction;
use dnls_spectral::{Field, Grid};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::AnalysisError;
use crate::gauge::gauge_apply_numeric;
use crate::norms::modulation_norm;

/// Box of length 64 with 512 points; bumps sit in the middle half.
pub const PROBE_LENGTH: f64 = 64.0;
pub const PROBE_POINTS: usize = 512;
const BUMPS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LipschitzProbe {
    pub s: f64,
    pub p: f64,
    pub radius: f64,
    pub trials: usize,
    pub seed: u64,
    pub evaluated: usize,
    pub skipped: usize,
    pub max_ratio: f64,
    pub median_ratio: f64,
}

/// Sum of modulated Gaussians `A e^{-(x-x₀)²/w²} e^{iξ₀x}` away from the box edges.
pub fn random_bumps(grid: Grid, rng: &mut ChaCha8Rng) -> Field {
    let l = grid.length();
    let bumps: Vec<(Complex64, f64, f64, f64)> = (0..BUMPS)
        .map(|_| {
            let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (a, rng.gen_range(0.3 * l..0.7 * l), rng.gen_range(1.0..3.0), rng.gen_range(-4.0..4.0))
        })
        .collect();
    Field::from_fn(grid, |x| {
        bumps
            .iter()
            .map(|&(a, x0, w, xi)| a * (-((x - x0) / w).powi(2)).exp() * Complex64::new(0.0, xi * x).exp())
            .sum()
    })
}

fn scaled(f: &Field, k: f64) -> Field {
    Field {
        samples: f.samples.iter().map(|z| z * k).collect(),
        ..f.clone()
    }
}

fn difference(a: &Field, b: &Field) -> Field {
    Field {
        samples: a.samples.iter().zip(&b.samples).map(|(x, y)| x - y).collect(),
        ..a.clone()
    }
}

/// Ratios `‖G₋u - G₋v‖ / ‖u - v‖` in `M^s_{2,p}` for pairs in the ball of the given radius.
/// Each trial draws shapes from ChaCha8 stream `trial` of `seed` and scales them by the
/// radius, so probes at different radii see the same directions.
pub fn gauge_lipschitz_probe(s: f64, p: f64, radius: f64, trials: usize, seed: u64) -> Result<LipschitzProbe, AnalysisError> {
    if p.is_nan() || p < 1.0 {
        return Err(AnalysisError::InvalidParameter(format!("p = {p} must be at least 1")));
    }
    if s <= 0.5 - 1.0 / p {
        return Err(AnalysisError::InvalidParameter(format!("need s > 1/2 - 1/p, got s = {s}, p = {p}")));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(AnalysisError::InvalidParameter(format!("radius {radius}")));
    }
    let grid = Grid::new(PROBE_POINTS, PROBE_LENGTH)?;
    let results: Vec<Option<f64>> = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<Option<f64>, AnalysisError> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let a = random_bumps(grid, &mut rng);
            let b = random_bumps(grid, &mut rng);
            let tau = 10f64.powf(rng.gen_range(-2.0..0.0));
            let (rho1, rho2) = (rng.gen_range(0.1..=1.0), rng.gen_range(0.1..=1.0));
            let unit = |f: &Field| scaled(f, 1.0 / modulation_norm(f, s, p));
            let u = scaled(&unit(&a), radius * rho1);
            let mixed = Field {
                samples: a.samples.iter().zip(&b.samples).map(|(x, y)| x + tau * y).collect(),
                ..a.clone()
            };
            let v = scaled(&unit(&mixed), radius * rho2);
            let den = modulation_norm(&difference(&u, &v), s, p);
            if den < 1e-14 * radius {
                return Ok(None);
            }
            let gu = gauge_apply_numeric(&u, Direction::Minus)?;
            let gv = gauge_apply_numeric(&v, Direction::Minus)?;
            Ok(Some(modulation_norm(&difference(&gu, &gv), s, p) / den))
        })
        .collect::<Result<_, _>>()?;
    let mut ratios: Vec<f64> = results.iter().flatten().copied().collect();
    ratios.sort_by(f64::total_cmp);
    let evaluated = ratios.len();
    Ok(LipschitzProbe {
        s,
        p,
        radius,
        trials,
        seed,
        evaluated,
        skipped: trials - evaluated,
        max_ratio: ratios.last().copied().unwrap_or(f64::NAN),
        median_ratio: if evaluated > 0 { ratios[evaluated / 2] } else { f64::NAN },
    })
}
