//! Symbolic gauge transformation `v = exp(-i ∫_{-∞}^x |u|²) u`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::AlgebraError;
use crate::hierarchy::{extract_bad_cubics, merge_symmetric, Equation, Parity};
use crate::poly::{DiffPoly, Factor, Monomial, Var};
use crate::rational::GaussianRational;

/// Key under which `∂_x` is triangular: factors sorted descending by (order, variable).
fn lead_key(m: &Monomial) -> Vec<(u32, Var)> {
    let mut k: Vec<(u32, Var)> = m.factors().iter().map(|f| (f.order, f.var)).collect();
    k.sort_unstable_by(|a, b| b.cmp(a));
    k
}

/// Top factor of `m` in the (order, variable) order, with its multiplicity.
fn top_factor(m: &Monomial) -> Option<(Factor, usize)> {
    let top = m.factors().iter().max_by_key(|f| (f.order, f.var))?;
    Some((*top, m.multiplicity(*top)))
}

/// Returns `P` with `∂_x P = p`.
///
/// The leading term of `∂_x m` raises the top factor of `m`, and this map is strictly
/// monotone, so peeling off the largest remaining term solves the graded system exactly.
/// Terms that cannot be leading terms form the reported obstruction.
pub fn antiderivative(p: &DiffPoly) -> Result<DiffPoly, AlgebraError> {
    let mut rest: BTreeMap<Vec<(u32, Var)>, (Monomial, GaussianRational)> = p
        .terms()
        .map(|(m, c)| (lead_key(m), (m.clone(), c.clone())))
        .collect();
    let mut result = DiffPoly::zero();
    let mut obstruction = DiffPoly::zero();
    while let Some((_, (t, coeff))) = rest.pop_last() {
        let candidate = top_factor(&t).and_then(|(f, _)| {
            if f.order == 0 {
                return None;
            }
            let m = t.replace(f, Factor::new(f.var, f.order - 1))?;
            let (mf, mult) = top_factor(&m)?;
            let lead = m.replace(mf, Factor::new(mf.var, mf.order + 1))?;
            (lead == t).then_some((m, mult))
        });
        let Some((m, mult)) = candidate else {
            obstruction.add_term(t, coeff);
            continue;
        };
        let c = &coeff / &GaussianRational::from_int(mult as i64);
        let image = DiffPoly::monomial(m.clone(), c.clone()).dx();
        for (im, ic) in image.terms() {
            if *im == t {
                continue;
            }
            let key = lead_key(im);
            let vanished = {
                let entry = rest
                    .entry(key.clone())
                    .or_insert_with(|| (im.clone(), GaussianRational::zero()));
                entry.1 -= ic;
                entry.1.is_zero()
            };
            if vanished {
                rest.remove(&key);
            }
        }
        result.add_term(m, c);
    }
    if obstruction.is_zero() {
        Ok(result)
    } else {
        Err(AlgebraError::NotExact {
            component: obstruction.to_string(),
        })
    }
}

fn require_schrodinger(eq: &Equation) -> Result<(), AlgebraError> {
    if eq.parity != Parity::Schrodinger {
        return Err(AlgebraError::Precondition(format!(
            "n = {} is not of Schrödinger type",
            eq.n
        )));
    }
    Ok(())
}

/// `u_τ` from the canonical form `i u_τ + sign ∂^{2j} u = N`.
fn canonical_time_derivative(eq: &Equation) -> DiffPoly {
    let lin = DiffPoly::q(eq.linear.order).scale(&GaussianRational::from_int(-eq.linear.sign as i64));
    (&lin + &eq.nonlinearity).scale(&-GaussianRational::i())
}

/// `Φ_t` with `∂_x Φ_t = u_t ū + u ū_t`.
pub fn phase_time_derivative(eq: &Equation) -> Result<DiffPoly, AlgebraError> {
    require_schrodinger(eq)?;
    let ut = canonical_time_derivative(eq);
    let rt = ut.conj();
    let density = &(&ut * &DiffPoly::r(0)) + &(&DiffPoly::q(0) * &rt);
    antiderivative(&density)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Plus => 1,
            Direction::Minus => -1,
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::Plus => Direction::Minus,
            Direction::Minus => Direction::Plus,
        }
    }
}

/// Substitutes `∂^k q ↦ D^k q`, `∂^k r ↦ D̄^k r` with `D = ∂ ± i q r`, `D̄ = ∂ ∓ i q r`.
pub fn twist_substitute(p: &DiffPoly, direction: Direction) -> Result<DiffPoly, AlgebraError> {
    if let Some((m, _)) = p.terms().find(|(m, _)| !m.is_phase_balanced()) {
        return Err(AlgebraError::PhaseImbalance {
            monomial: m.to_string(),
        });
    }
    let iqr = (&DiffPoly::q(0) * &DiffPoly::r(0)).scale(&GaussianRational::from_parts(0, 1, direction.sign(), 1));
    let mut chains: BTreeMap<Var, Vec<DiffPoly>> = BTreeMap::new();
    Ok(p.substitute(|f| {
        let shift = match f.var {
            Var::Q => iqr.clone(),
            Var::R => -&iqr,
        };
        let chain = chains
            .entry(f.var)
            .or_insert_with(|| vec![DiffPoly::var(f.var, 0)]);
        while chain.len() <= f.order as usize {
            let prev = chain.last().unwrap();
            let next = &prev.dx() + &(&shift * prev);
            chain.push(next);
        }
        chain[f.order as usize].clone()
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeDerivation {
    pub source: Equation,
    pub phase_time_derivative: DiffPoly,
    pub gauged: Equation,
    pub residual_bad_cubics: BTreeMap<u32, GaussianRational>,
}

impl GaugeDerivation {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("GaugeDerivation serializes")
    }
}

/// `(∂ - i q r)^{2j} q - ∂^{2j} q`, the covariant correction of the dispersive term.
fn covariant_correction(j: usize) -> DiffPoly {
    let miqr = (&DiffPoly::q(0) * &DiffPoly::r(0)).scale(&-GaussianRational::i());
    let mut t = DiffPoly::q(0);
    for _ in 0..2 * j {
        t = &t.dx() + &(&miqr * &t);
    }
    &t - &DiffPoly::q(2 * j as u32)
}

/// Nonlinearity of the equation for `v = e^{-iΦ} u` written in `u`, before twisting.
fn gauged_bracket(eq: &Equation, phi_t: &DiffPoly) -> DiffPoly {
    let s = GaussianRational::from_int(eq.linear.sign as i64);
    &(&eq.nonlinearity + &(phi_t * &DiffPoly::q(0))) + &covariant_correction(eq.j).scale(&s)
}

/// Gauges a hierarchy equation with unit time scale and checks that no bad cubic survives.
pub fn derive_gauged(eq: &Equation) -> Result<GaugeDerivation, AlgebraError> {
    require_schrodinger(eq)?;
    if eq.time_scale != GaussianRational::one() || eq.gauged {
        return Err(AlgebraError::Precondition(
            "gauging needs an ungauged equation with alpha = 2^n".into(),
        ));
    }
    let phi_t = phase_time_derivative(eq)?;
    let bracket = gauged_bracket(eq, &phi_t);
    let nonlinearity = twist_substitute(&bracket, Direction::Plus)?;
    let gauged = Equation {
        nonlinearity,
        flux: None,
        gauged: true,
        ..eq.clone()
    };
    let residual = extract_bad_cubics(&gauged);
    if !residual.is_empty() {
        let coefficients = residual
            .iter()
            .map(|(k, c)| format!("k={k}: {}", c.to_compact()))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(AlgebraError::ResidualBadCubic { coefficients });
    }
    Ok(GaugeDerivation {
        source: eq.clone(),
        phase_time_derivative: phi_t,
        gauged,
        residual_bad_cubics: residual,
    })
}

/// Every nonlinear monomial has `2k+1` factors (`1 ≤ k ≤ 2j`), `2j-k` derivatives,
/// one extra `q`, and no cubic carries all its derivatives on `q`-factors.
pub fn is_gauged_form(eq: &Equation) -> bool {
    let j = eq.j as u32;
    eq.nonlinearity.terms().all(|(m, _)| {
        let deg = m.degree() as u32;
        if deg.is_multiple_of(2) || !m.is_phase_balanced() {
            return false;
        }
        let k = deg / 2;
        if !(1..=2 * j).contains(&k) || m.derivative_count() + k != 2 * j {
            return false;
        }
        !(deg == 3 && m.factors()[2] == Factor::r(0))
    })
}

/// `i(-1)^{j+1}(C(2j+1, ℓ+1) - δ_{0ℓ} - δ_{2j-1,ℓ})`.
pub fn gauge_lifted_coefficient(j: u32, l: u32) -> GaussianRational {
    let s = if j % 2 == 1 { 1 } else { -1 };
    let b = num_integer::binomial(2 * j as i64 + 1, l as i64 + 1) - (l == 0) as i64 - (l == 2 * j - 1) as i64;
    GaussianRational::from_parts(0, 1, s * b, 1)
}

pub fn gauge_lifted_bad_cubics(j: u32) -> BTreeMap<u32, GaussianRational> {
    let n = 2 * j - 1;
    (0..=n / 2)
        .map(|key| (key, merge_symmetric(n, key, |l| gauge_lifted_coefficient(j, l))))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// Bad cubics generated by the gauge from the dispersive term alone: the phase
/// derivative of the linear flow times `q` plus the covariant correction.
pub fn linear_gauge_bad_cubics(j: usize) -> Result<BTreeMap<u32, GaussianRational>, AlgebraError> {
    let s = if j % 2 == 1 { 1 } else { -1 };
    let lin = Equation {
        n: 2 * j - 1,
        j,
        parity: Parity::Schrodinger,
        alpha: GaussianRational::from_int(1 << (2 * j - 1)),
        time_scale: GaussianRational::one(),
        linear: crate::hierarchy::LinearPart {
            order: 2 * j as u32,
            sign: s,
        },
        nonlinearity: DiffPoly::zero(),
        flux: None,
        gauged: false,
    };
    let phi_t = phase_time_derivative(&lin)?;
    let bracket = gauged_bracket(&lin, &phi_t);
    let cubic = Equation {
        nonlinearity: bracket.filter(|m| m.degree() == 3),
        ..lin
    };
    Ok(extract_bad_cubics(&cubic))
}
