use num_complex::Complex64;
use serde::Serialize;

use crate::error::AnalysisError;
use crate::norms::dual_exponent;
use crate::spectrum::Spectrum;

/// Lattice points per packet width on the default lattice.
pub const PACKET_MODES: usize = 32;

/// `φ̂ = γ^{-1/r'} N^{-s} χ_{[N, N+γ)}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PacketSpec {
    pub n: f64,
    pub gamma: f64,
    pub s: f64,
    pub r: f64,
    pub j: usize,
}

impl PacketSpec {
    /// Width `γ = N^{-(j-1)}`.
    pub fn new(j: usize, n: f64, s: f64, r: f64) -> Self {
        Self {
            n,
            gamma: n.powi(1 - j as i32),
            s,
            r,
            j,
        }
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.j == 0 || !(self.gamma > 0.0 && self.gamma <= 1.0 && self.n >= 1.0) || self.r.is_nan() || self.r <= 1.0 {
            return Err(AnalysisError::InvalidParameter(format!("invalid packet {self:?}")));
        }
        Ok(())
    }

    pub fn amplitude(&self) -> f64 {
        self.gamma.powf(-1.0 / dual_exponent(self.r)) * self.n.powf(-self.s)
    }

    /// `Δξ = γ / 32`.
    pub fn default_dxi(&self) -> f64 {
        self.gamma / PACKET_MODES as f64
    }
}

/// Samples the packet on the lattice `Δξ ℤ`, keeping `ξ ∈ [N, N+γ)`.
pub fn packet_datum(spec: &PacketSpec, dxi: f64) -> Result<Spectrum, AnalysisError> {
    spec.validate()?;
    if !(dxi.is_finite() && dxi > 0.0) {
        return Err(AnalysisError::InvalidParameter(format!("lattice spacing {dxi}")));
    }
    let eps = 1e-9;
    let first = (spec.n / dxi - eps).ceil() as i64;
    let end = ((spec.n + spec.gamma) / dxi - eps).ceil() as i64;
    let count = (end - first).max(0) as usize;
    if count < PACKET_MODES {
        return Err(AnalysisError::Resolution(format!(
            "{count} lattice points in [N, N+γ), need {PACKET_MODES}"
        )));
    }
    Ok(Spectrum::new(dxi, first, vec![Complex64::new(spec.amplitude(), 0.0); count]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_and_resolution() {
        let spec = PacketSpec::new(2, 16.0, 1.0, 2.0);
        let sp = packet_datum(&spec, spec.default_dxi()).unwrap();
        assert_eq!(sp.len(), 32);
        assert!((sp.frequency(0) - 16.0).abs() < 1e-12);
        assert!(sp.frequency(31) < 16.0 + spec.gamma);
        assert!(packet_datum(&spec, spec.gamma / 16.0).is_err());
        assert!(PacketSpec::new(2, 0.5, 1.0, 2.0).validate().is_err());
    }
}
