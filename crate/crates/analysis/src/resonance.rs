use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::AnalysisError;

/// Samples below `DISCARD_FLOOR · R^{2j}` on the right side are treated as resonant.
pub const DISCARD_FLOOR: f64 = 1e-9;
const CHUNK: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResonanceSample {
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
    pub alpha: f64,
    pub lhs: f64,
    pub rhs: f64,
}

/// `lhs = ||ξ|^α - |ξ₁|^α + |ξ₂|^α - |ξ₃|^α|` with `ξ = ξ₁ + ξ₂ + ξ₃` and
/// `rhs = |ξ₁ + ξ₂| |ξ₂ + ξ₃| |ξ_max|^{α-2}`.
pub fn resonance_sample(xi1: f64, xi2: f64, xi3: f64, alpha: f64) -> ResonanceSample {
    let xi = xi1 + xi2 + xi3;
    let p = |x: f64| x.abs().powf(alpha);
    let lhs = (p(xi) - p(xi1) + p(xi2) - p(xi3)).abs();
    let max = [xi, xi1, xi2, xi3].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let rhs = (xi1 + xi2).abs() * (xi2 + xi3).abs() * max.powf(alpha - 2.0);
    ResonanceSample {
        xi1,
        xi2,
        xi3,
        alpha,
        lhs,
        rhs,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResonanceStats {
    pub j: usize,
    pub alpha: f64,
    pub radius: f64,
    pub seed: u64,
    pub requested: usize,
    pub kept: usize,
    pub discarded: usize,
    pub min: f64,
    pub median: f64,
    pub max: f64,
    pub argmin: Option<ResonanceSample>,
}

/// Ratio statistics of `lhs/rhs` for `ξᵢ` uniform in `[-R, R]` and `α = 2j`. Chunk `k` draws
/// from ChaCha8 stream `k` of `seed`, so results do not depend on the thread count.
pub fn resonance_ratio_stats(j: usize, count: usize, seed: u64, radius: f64) -> Result<ResonanceStats, AnalysisError> {
    if j == 0 || count == 0 || !(radius.is_finite() && radius > 0.0) {
        return Err(AnalysisError::InvalidParameter(format!(
            "need j >= 1, count >= 1, radius > 0 (got {j}, {count}, {radius})"
        )));
    }
    let alpha = 2.0 * j as f64;
    let floor = DISCARD_FLOOR * radius.powf(alpha);
    let chunks = count.div_ceil(CHUNK);
    let per_chunk: Vec<(Vec<f64>, Option<ResonanceSample>)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let n = CHUNK.min(count - k * CHUNK);
            let mut ratios = Vec::with_capacity(n);
            let mut best: Option<(f64, ResonanceSample)> = None;
            for _ in 0..n {
                let s = resonance_sample(
                    rng.gen_range(-radius..=radius),
                    rng.gen_range(-radius..=radius),
                    rng.gen_range(-radius..=radius),
                    alpha,
                );
                if s.rhs < floor {
                    continue;
                }
                let q = s.lhs / s.rhs;
                if best.is_none_or(|(b, _)| q < b) {
                    best = Some((q, s));
                }
                ratios.push(q);
            }
            (ratios, best.map(|(_, s)| s))
        })
        .collect();
    let mut ratios: Vec<f64> = Vec::with_capacity(count);
    let mut argmin: Option<ResonanceSample> = None;
    for (r, b) in per_chunk {
        ratios.extend(r);
        if let Some(b) = b {
            if argmin.is_none_or(|a| b.lhs / b.rhs < a.lhs / a.rhs) {
                argmin = Some(b);
            }
        }
    }
    ratios.sort_by(f64::total_cmp);
    let kept = ratios.len();
    let (min, median, max) = if kept == 0 {
        (f64::NAN, f64::NAN, f64::NAN)
    } else {
        (ratios[0], ratios[kept / 2], ratios[kept - 1])
    };
    Ok(ResonanceStats {
        j,
        alpha,
        radius,
        seed,
        requested: count,
        kept,
        discarded: count - kept,
        min,
        median,
        max,
        argmin,
    })
}
