use dnls_core::{build_hierarchy_equation, DiffPoly, GaussianRational};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::AnalysisError;
use crate::norms::{dual_exponent, hat_norm_spectrum};
use crate::packet::{packet_datum, PacketSpec};
use crate::picard::{max_resonance, picard3};

/// The time is fixed by `t · max|Φ| = TIME_FACTOR`, inside the regime where the kernel is ≈ t.
pub const TIME_FACTOR: f64 = 0.1;

/// Cubic part of the j-th Schrödinger-type hierarchy equation.
pub fn hierarchy_cubic(j: usize) -> Result<DiffPoly, AnalysisError> {
    if j == 0 {
        return Err(AnalysisError::InvalidParameter("j must be positive".into()));
    }
    let n = 2 * j - 1;
    let eq = build_hierarchy_equation(n, &GaussianRational::from_int(1 << n))?;
    Ok(eq.nonlinearity.filter(|m| m.degree() == 3))
}

/// `-2s + (2j-2)/r' + 1`.
pub fn predicted_exponent(j: usize, s: f64, r: f64) -> f64 {
    -2.0 * s + (2.0 * j as f64 - 2.0) / dual_exponent(r) + 1.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub residuals: Vec<f64>,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit, AnalysisError> {
    let n = xs.len();
    if n != ys.len() || n < 4 {
        return Err(AnalysisError::FitDegenerate(format!("{n} points, need at least 4")));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(AnalysisError::FitDegenerate("non-finite data".into()));
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-300 {
        return Err(AnalysisError::FitDegenerate("abscissae coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - slope * x - intercept).collect();
    let ssr: f64 = residuals.iter().map(|r| r * r).sum();
    Ok(LinearFit {
        slope,
        intercept,
        slope_stderr: (ssr / (n - 2) as f64 / sxx).sqrt(),
        residuals,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthPoint {
    pub n: f64,
    pub gamma: f64,
    pub lattice_points: usize,
    pub t: f64,
    pub input_norm: f64,
    pub output_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    pub j: usize,
    pub s: f64,
    pub r: f64,
    pub predicted: f64,
    /// Fit of `ln(‖u₃(t)‖ / t)` against `ln N`.
    pub fit: LinearFit,
    pub points: Vec<GrowthPoint>,
}

impl GrowthFit {
    pub fn deviation(&self) -> f64 {
        (self.fit.slope - self.predicted).abs()
    }
}

pub fn growth_point(j: usize, s: f64, r: f64, n: f64, cubic: &DiffPoly) -> Result<GrowthPoint, AnalysisError> {
    let spec = PacketSpec::new(j, n, s, r);
    let phi = packet_datum(&spec, spec.default_dxi())?;
    let max_phi = max_resonance(j, &phi);
    let t = if max_phi > 0.0 { TIME_FACTOR / max_phi } else { TIME_FACTOR };
    let out = picard3(j, cubic, &phi, t)?;
    Ok(GrowthPoint {
        n,
        gamma: spec.gamma,
        lattice_points: phi.len(),
        t,
        input_norm: hat_norm_spectrum(&phi, s, r),
        output_norm: hat_norm_spectrum(&out, s, r),
    })
}

/// Third-iterate growth in `N` for packet data, fitted on a log-log scale.
pub fn growth_exponent_fit(j: usize, s: f64, r: f64, n_list: &[f64]) -> Result<GrowthFit, AnalysisError> {
    if n_list.len() < 4 {
        return Err(AnalysisError::FitDegenerate(format!("{} frequencies, need at least 4", n_list.len())));
    }
    let cubic = hierarchy_cubic(j)?;
    let points = n_list
        .par_iter()
        .map(|&n| growth_point(j, s, r, n, &cubic))
        .collect::<Result<Vec<_>, _>>()?;
    let xs: Vec<f64> = points.iter().map(|p| p.n.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.output_norm / p.t).ln()).collect();
    Ok(GrowthFit {
        j,
        s,
        r,
        predicted: predicted_exponent(j, s, r),
        fit: linear_fit(&xs, &ys)?,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!(f.slope_stderr < 1e-12);
        assert!(linear_fit(&xs[..3], &ys[..3]).is_err());
        assert!(linear_fit(&[1.0; 4], &ys).is_err());
    }

    #[test]
    fn predicted_values() {
        assert_eq!(predicted_exponent(2, 0.5, 2.0), 1.0);
        assert_eq!(predicted_exponent(2, 1.0, 2.0), 0.0);
        assert_eq!(predicted_exponent(3, 1.0, 2.0), 1.0);
    }
}
