use dnls_core::{DiffPoly, GaussianRational, Var};
use num_complex::Complex64;

use crate::error::SpectralError;
use crate::grid::{Field, Grid};

/// `i q² ∂^{2j-1} r`, the model nonlinearity admitting explicit plane waves.
pub fn plane_wave_monomial(j: usize) -> DiffPoly {
    (&DiffPoly::q(0).pow(2) * &DiffPoly::r(2 * j as u32 - 1)).scale(&GaussianRational::i())
}

/// Symbol of a balanced polynomial on the single mode `e^{iNx}` with unit amplitude.
pub fn single_mode_symbol(p: &DiffPoly, n: i64) -> GaussianRational {
    let iq = GaussianRational::from_parts(0, 1, n, 1);
    let ir = iq.conj();
    let mut total = GaussianRational::zero();
    for (m, c) in p.terms() {
        let mut v = c.clone();
        for f in m.factors() {
            v = &v * &match f.var {
                Var::Q => iq.pow(f.order as i32),
                Var::R => ir.pow(f.order as i32),
            };
        }
        total += v;
    }
    total
}

/// The sign `σ` for which `u = A e^{i(Nx - ωt)}`, `ω = N^{2j} - N^{2j-1}|A|²`, solves
/// `i u_t + (-1)^{j+1} ∂^{2j} u = σ i u² ∂^{2j-1} ū`, found by exact substitution.
pub fn plane_wave_sign(j: usize) -> Result<i32, SpectralError> {
    if j == 0 {
        return Err(SpectralError::Config("j must be positive".into()));
    }
    let mono = plane_wave_monomial(j);
    let mut sign = None;
    for n in [1i64, 2, 3] {
        let big_n = GaussianRational::from_int(n);
        // unit amplitude: (i u_t - ∂^{2j}-part) / u
        let omega = &big_n.pow(2 * j as i32) - &big_n.pow(2 * j as i32 - 1);
        let lin = GaussianRational::from_int(if j % 2 == 1 { 1 } else { -1 }) * GaussianRational::i().pow(2 * j as i32) * big_n.pow(2 * j as i32);
        let lhs = &omega + &lin;
        let rhs = single_mode_symbol(&mono, n);
        let s = if lhs == rhs {
            1
        } else if lhs == -rhs {
            -1
        } else {
            return Err(SpectralError::Config(format!("no plane-wave sign for j = {j} at N = {n}")));
        };
        if *sign.get_or_insert(s) != s {
            return Err(SpectralError::Config(format!("plane-wave sign depends on N for j = {j}")));
        }
    }
    Ok(sign.expect("at least one frequency tested"))
}

/// The nonlinearity with the sign from [`plane_wave_sign`].
pub fn plane_wave_nonlinearity(j: usize) -> Result<DiffPoly, SpectralError> {
    let s = plane_wave_sign(j)?;
    Ok(plane_wave_monomial(j).scale(&GaussianRational::from_int(s as i64)))
}

/// `A e^{i(ξx - ωt)}` with `ξ = N·2π/L`, `A = ξ^{-s} a`, `ω = ξ^{2j} - ξ^{2j-1}|A|²`.
pub fn plane_wave_reference(grid: Grid, j: usize, n: i64, a: Complex64, s: f64, t: f64) -> Field {
    let xi = n as f64 * grid.dxi();
    let amp = a * xi.abs().powf(-s);
    let e = 2 * j as i32;
    let omega = xi.powi(e) - xi.powi(e - 1) * amp.norm_sqr();
    let mut f = Field::from_fn(grid, |x| amp * Complex64::new(0.0, xi * x - omega * t).exp());
    f.time = t;
    f
}
