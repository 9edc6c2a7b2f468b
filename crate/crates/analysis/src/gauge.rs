use dnls_core::Direction;
use dnls_spectral::{Field, Transform};
use num_complex::Complex64;

use crate::error::AnalysisError;

/// Fraction of leading grid points on which the field must already have decayed.
pub const BOUNDARY_FRACTION: f64 = 0.01;
pub const BOUNDARY_TOLERANCE: f64 = 1e-8;

/// `Φ(x) = ∫_0^x |f|²`: linear term for the mean plus the spectral antiderivative of the rest.
pub fn cumulative_mass(f: &Field) -> Vec<f64> {
    let g = f.grid;
    let m = g.points();
    let mut c: Vec<Complex64> = f.samples.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
    let mut t = Transform::new(m);
    t.forward(&mut c);
    let mean = c[0].re;
    c[0] = Complex64::new(0.0, 0.0);
    c[m / 2] = Complex64::new(0.0, 0.0);
    for (k, z) in c.iter_mut().enumerate().skip(1) {
        *z /= Complex64::new(0.0, g.wavenumber(k));
    }
    t.inverse(&mut c);
    let offset = c[0].re;
    (0..m).map(|i| mean * g.x(i) + c[i].re - offset).collect()
}

pub fn check_boundary_decay(f: &Field) -> Result<(), AnalysisError> {
    let n = ((f.grid.points() as f64 * BOUNDARY_FRACTION).ceil() as usize).max(1);
    let max = f.samples[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max >= BOUNDARY_TOLERANCE {
        return Err(AnalysisError::BoundaryDecayViolation { max });
    }
    Ok(())
}

/// `G_±(f) = e^{±iΦ} f`; the gauged hierarchy equations are written for `v = G_-(u)`.
pub fn gauge_apply_numeric(f: &Field, direction: Direction) -> Result<Field, AnalysisError> {
    check_boundary_decay(f)?;
    let phi = cumulative_mass(f);
    let sign = direction.sign() as f64;
    let samples = f
        .samples
        .iter()
        .zip(&phi)
        .map(|(z, p)| z * Complex64::new(0.0, sign * p).exp())
        .collect();
    Ok(Field {
        grid: f.grid,
        samples,
        time: f.time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use dnls_spectral::Grid;

    fn bump(g: Grid) -> Field {
        Field::from_fn(g, |x| Complex64::new(0.4, 0.1) * (-(x - 16.0).powi(2) / 4.0).exp() * Complex64::new(0.0, 0.7 * x).exp())
    }

    #[test]
    fn phase_is_the_cumulative_mass() {
        let g = Grid::new(256, 32.0).unwrap();
        let f = bump(g);
        let phi = cumulative_mass(&f);
        assert!(phi[0].abs() < 1e-15);
        assert!((phi[255] + f.grid.dx() * f.samples[255].norm_sqr() - f.mass()).abs() < 1e-12);
        // half of the Gaussian mass 0.17 √(2π)
        let half = 0.17 * (std::f64::consts::PI / 2.0).sqrt();
        assert!((phi[128] - half).abs() < 1e-12);
    }

    #[test]
    fn zero_and_decay() {
        let g = Grid::new(64, 32.0).unwrap();
        let z = gauge_apply_numeric(&Field::zeros(g), Direction::Minus).unwrap();
        assert_eq!(z.max_abs(), 0.0);
        let f = Field::from_fn(g, |x| Complex64::new(x.cos() + 2.0, 0.0));
        assert!(matches!(
            gauge_apply_numeric(&f, Direction::Plus),
            Err(AnalysisError::BoundaryDecayViolation { .. })
        ));
    }
}
