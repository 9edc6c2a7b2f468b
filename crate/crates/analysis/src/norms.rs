//! Discrete norms. Lattice sums carry the weight `Δξ` so that values converge to the
//! continuum norms of the unitary Fourier transform under refinement.

use std::collections::BTreeMap;

use dnls_spectral::Field;
use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::spectrum::Spectrum;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormSpec {
    /// `‖⟨ξ⟩^s û‖_{L^{r'}}`, `r ∈ (1, ∞]`.
    FourierLebesgue { s: f64, r: f64 },
    /// `ℓ^p` over unit boxes `[n-1/2, n+1/2)` of `⟨n⟩^s ‖□_n u‖_{L²}`, `p ∈ [1, ∞]`.
    Modulation { s: f64, p: f64 },
}

impl NormSpec {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        match *self {
            NormSpec::FourierLebesgue { s, r } => {
                if !s.is_finite() || r.is_nan() || r <= 1.0 {
                    return Err(AnalysisError::InvalidParameter(format!("need r > 1, got s = {s}, r = {r}")));
                }
            }
            NormSpec::Modulation { s, p } => {
                if !s.is_finite() || p.is_nan() || p < 1.0 {
                    return Err(AnalysisError::InvalidParameter(format!("need p >= 1, got s = {s}, p = {p}")));
                }
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, sp: &Spectrum) -> Result<f64, AnalysisError> {
        self.validate()?;
        Ok(match *self {
            NormSpec::FourierLebesgue { s, r } => hat_norm_spectrum(sp, s, r),
            NormSpec::Modulation { s, p } => modulation_norm_spectrum(sp, s, p),
        })
    }
}

/// `⟨x⟩ = (1 + x²)^{1/2}`.
pub fn japanese(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

/// Hölder conjugate; `r = ∞` gives 1.
pub fn dual_exponent(r: f64) -> f64 {
    if r.is_infinite() {
        1.0
    } else {
        r / (r - 1.0)
    }
}

fn lp(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, f64::max)
    } else {
        values.map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

pub fn hat_norm_spectrum(sp: &Spectrum, s: f64, r: f64) -> f64 {
    let rp = dual_exponent(r);
    let w = sp.dxi.powf(1.0 / rp);
    w * lp(sp.iter().map(|(xi, v)| japanese(xi).powf(s) * v.norm()), rp)
}

/// Fourier-Lebesgue norm `‖u‖_{Ĥ^s_r}`.
pub fn hat_norm(f: &Field, s: f64, r: f64) -> f64 {
    hat_norm_spectrum(&Spectrum::from_field(f), s, r)
}

/// Box index `n` with `ξ ∈ [n - 1/2, n + 1/2)`.
pub fn box_index(xi: f64) -> i64 {
    (xi + 0.5).floor() as i64
}

/// `‖□_n u‖_{L²}` per occupied box.
pub fn box_norms(sp: &Spectrum) -> BTreeMap<i64, f64> {
    let mut acc: BTreeMap<i64, f64> = BTreeMap::new();
    for (xi, v) in sp.iter() {
        *acc.entry(box_index(xi)).or_default() += sp.dxi * v.norm_sqr();
    }
    acc.into_iter().map(|(n, e)| (n, e.sqrt())).collect()
}

pub fn modulation_norm_spectrum(sp: &Spectrum, s: f64, p: f64) -> f64 {
    lp(box_norms(sp).into_iter().map(|(n, e)| japanese(n as f64).powf(s) * e), p)
}

/// Modulation norm `‖u‖_{M^s_{2,p}}`.
pub fn modulation_norm(f: &Field, s: f64, p: f64) -> f64 {
    modulation_norm_spectrum(&Spectrum::from_field(f), s, p)
}

/// Constant `C` in `‖u‖_{M^{s1}_{2,q1}} ≤ C ‖u‖_{M^{s2}_{2,q2}}` from Hölder in `n`, finite when
/// `s2 - s1 > 1/q1 - 1/q2 > 0`; `None` otherwise.
pub fn modulation_embedding_constant(s1: f64, q1: f64, s2: f64, q2: f64) -> Option<f64> {
    let gap = 1.0 / q1 - 1.0 / q2;
    if gap <= 0.0 || s2 - s1 <= gap {
        return None;
    }
    let rho = 1.0 / gap;
    let e = (s1 - s2) * rho;
    // Σ_{n∈ℤ} ⟨n⟩^e by direct summation plus an integral tail bound
    let cut = 100_000i64;
    let mut sum = 1.0;
    for n in 1..=cut {
        sum += 2.0 * japanese(n as f64).powf(e);
    }
    sum += 2.0 * (cut as f64).powf(e + 1.0) / -(e + 1.0);
    Some(sum.powf(1.0 / rho))
}
