use std::f64::consts::PI;

use dnls_core::{DiffPoly, Var};
use dnls_spectral::evaluator::to_complex;
use num_complex::Complex64;

use crate::error::AnalysisError;
use crate::spectrum::Spectrum;

/// Symbol of a cubic `u ū u` nonlinearity: `∂^a u ∂^b u ∂^c ū ↦ (iξ₁)^a (iξ₃)^b (-iξ₂)^c`,
/// symmetrized in the two `u` slots.
#[derive(Clone, Debug)]
pub struct CubicSymbol {
    terms: Vec<(Complex64, u32, u32, u32)>,
}

impl CubicSymbol {
    pub fn new(cubic: &DiffPoly) -> Result<Self, AnalysisError> {
        let mut terms = Vec::new();
        for (m, c) in cubic.terms() {
            let qs: Vec<u32> = m.factors().iter().filter(|f| f.var == Var::Q).map(|f| f.order).collect();
            let rs: Vec<u32> = m.factors().iter().filter(|f| f.var == Var::R).map(|f| f.order).collect();
            if qs.len() != 2 || rs.len() != 1 {
                return Err(AnalysisError::InvalidParameter(format!("`{m}` is not of the form u u ū")));
            }
            terms.push((to_complex(c), qs[0], qs[1], rs[0]));
        }
        Ok(Self { terms })
    }

    pub fn eval(&self, x1: f64, x2: f64, x3: f64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        let (p1, p2, p3) = (i * x1, -i * x2, i * x3);
        self.terms
            .iter()
            .map(|&(c, a, b, k)| c * 0.5 * (p1.powu(a) * p3.powu(b) + p1.powu(b) * p3.powu(a)) * p2.powu(k))
            .sum()
    }
}

/// `Φ = -ξ^{2j} + ξ₁^{2j} - ξ₂^{2j} + ξ₃^{2j}` with `ξ = ξ₁ - ξ₂ + ξ₃`, expanded about `base`
/// (`ξᵢ = base + δᵢ`) so that the cancelling top-order parts never get rounded.
pub fn resonance_function(j: usize, base: f64, d1: f64, d2: f64, d3: f64) -> f64 {
    let e = 2 * j as u32;
    let d = d1 - d2 + d3;
    let mut binom = 1.0;
    let mut total = 0.0;
    for k in 1..=e {
        binom = binom * (e - k + 1) as f64 / k as f64;
        if k < 2 {
            continue;
        }
        let ki = k as i32;
        let p = d1.powi(ki) - d2.powi(ki) + d3.powi(ki) - d.powi(ki);
        total += binom * base.powi((e - k) as i32) * p;
    }
    total
}

/// `∫_0^t e^{-iΦt'} dt' = (e^{-iΦt} - 1)/(-iΦ)`, equal to `t` at `Φ = 0`; modulus at most `t`.
pub fn time_kernel(phi: f64, t: f64) -> Complex64 {
    let x = phi * t;
    if x == 0.0 {
        return Complex64::new(t, 0.0);
    }
    let half = (x / 2.0).sin();
    t * Complex64::new(x.sin() / x, -2.0 * half * half / x)
}

/// Largest `|Φ|` over all lattice triples of the spectrum.
pub fn max_resonance(j: usize, phi: &Spectrum) -> f64 {
    let base = phi.frequency(0);
    let n = phi.len();
    let mut max = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let r = resonance_function(j, base, a as f64 * phi.dxi, b as f64 * phi.dxi, c as f64 * phi.dxi);
                max = max.max(r.abs());
            }
        }
    }
    max
}

/// Cubic Duhamel iterate `-i ∫_0^t U(t-t') N₃(U(t')φ) dt'` for `i u_t + (-1)^{j+1}∂^{2j}u = N₃(u)`,
/// summed directly over the lattice simplex `ξ = ξ₁ - ξ₂ + ξ₃`.
pub fn picard3(j: usize, cubic: &DiffPoly, phi: &Spectrum, t: f64) -> Result<Spectrum, AnalysisError> {
    if j == 0 {
        return Err(AnalysisError::InvalidParameter("j must be positive".into()));
    }
    let symbol = CubicSymbol::new(cubic)?;
    let n = phi.len();
    let dxi = phi.dxi;
    let start = phi.start - (n as i64 - 1);
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; (3 * n).saturating_sub(2)];
    if n == 0 || t == 0.0 {
        return Ok(Spectrum::new(dxi, start, out));
    }
    let base = phi.frequency(0);
    let weight = dxi * dxi / (2.0 * PI);
    for a in 0..n {
        if phi.values[a] == zero {
            continue;
        }
        for b in 0..n {
            if phi.values[b] == zero {
                continue;
            }
            let ab = phi.values[a] * phi.values[b].conj();
            for c in 0..n {
                let v = phi.values[c];
                if v == zero {
                    continue;
                }
                let (x1, x2, x3) = (phi.frequency(a), phi.frequency(b), phi.frequency(c));
                let res = resonance_function(j, base, a as f64 * dxi, b as f64 * dxi, c as f64 * dxi);
                let contrib = symbol.eval(x1, x2, x3) * ab * v * time_kernel(res, t);
                out[a + c + (n - 1) - b] += contrib;
            }
        }
    }
    let e = 2 * j as i32;
    let mut sp = Spectrum::new(dxi, start, out);
    for k in 0..sp.len() {
        let xi = sp.frequency(k);
        let outer = Complex64::new(0.0, -xi.powi(e) * t).exp();
        sp.values[k] *= Complex64::new(0.0, -weight) * outer;
    }
    Ok(sp)
}
