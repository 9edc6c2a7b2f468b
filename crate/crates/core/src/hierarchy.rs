//! Conserved densities `Y_n`, the hierarchy equations and their bad cubic coefficients.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::poly::{DiffPoly, Factor, Monomial, Var};
use crate::rational::GaussianRational;

fn two_i() -> GaussianRational {
    GaussianRational::from_parts(0, 1, 2, 1)
}

fn sign(k: i64) -> GaussianRational {
    GaussianRational::from_int(if k.rem_euclid(2) == 0 { 1 } else { -1 })
}

static Y_CACHE: OnceLock<Mutex<Vec<Arc<DiffPoly>>>> = OnceLock::new();

/// `Y_0 = -r/(2i)`, `Y_{n+1} = (2i)^{-1} (∂_x Y_n + q Σ_k Y_{n-k} Y_k)`.
pub fn compute_y(n: usize) -> Arc<DiffPoly> {
    let cache = Y_CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut ys = cache.lock().unwrap_or_else(|e| e.into_inner());
    let c = two_i().inv();
    if ys.is_empty() {
        ys.push(Arc::new(DiffPoly::r(0).scale(&-&c)));
    }
    while ys.len() <= n {
        let m = ys.len() - 1;
        let mut sum = DiffPoly::zero();
        // Y_{m-k} Y_k pairs up symmetrically
        for k in 0..=m / 2 {
            let prod = &*ys[m - k] * &*ys[k];
            if k == m - k {
                sum = &sum + &prod;
            } else {
                sum = &sum + &prod.scale(&GaussianRational::from_int(2));
            }
        }
        let next = (&ys[m].dx() + &(&DiffPoly::q(0) * &sum)).scale(&c);
        ys.push(Arc::new(next));
    }
    ys[n].clone()
}

/// `I_n = ∫ q Y_n dx` density.
pub fn hamiltonian_density(n: usize) -> DiffPoly {
    &DiffPoly::q(0) * &*compute_y(n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingleFactorReport {
    pub actual: GaussianRational,
    /// `-(2i)^{-n}`
    pub stated: GaussianRational,
    /// `-(2i)^{-(n+1)}`
    pub shifted: GaussianRational,
    pub matches_stated: bool,
    pub matches_shifted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct YReport {
    pub n: usize,
    pub terms: usize,
    pub order: u32,
    pub items_passed: [bool; 4],
    /// Common sign of the integer multiples in item 4.
    pub coefficient_sign: i32,
    pub coefficient_sign_positive: bool,
    pub single_factor: SingleFactorReport,
}

fn violation(n: usize, item: u8, detail: String) -> AlgebraError {
    AlgebraError::PropertyViolation { n, item, detail }
}

fn integer_sign(x: &GaussianRational) -> Option<i32> {
    let zero = BigRational::from_integer(BigInt::from(0));
    if x.im != zero || !x.re.is_integer() || x.re == zero {
        return None;
    }
    Some(if x.re > zero { 1 } else { -1 })
}

/// Checks the structural statements about `Y_n`: monomial form, order `2n+1`,
/// one more `r` than `q`, and coefficients that are integer multiples of
/// `(-1)^k (2i)^{k-2n-1}` sharing one sign (`k` the derivative count). The common sign
/// is reported; it is `(-1)^{n+1}`, so "positive multiples" only holds for odd `n`.
/// The single-factor term is reported against the exponents `-n` and `-(n+1)`.
pub fn check_y_properties(n: usize) -> Result<YReport, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::Precondition("check_y_properties needs n >= 1".into()));
    }
    let y = compute_y(n);
    let order = 2 * n as u32 + 1;
    for (m, _) in y.terms() {
        if m.degree() == 0 {
            return Err(violation(n, 1, "constant term".into()));
        }
    }
    for (m, _) in y.terms() {
        if m.order() != order {
            return Err(violation(n, 2, format!("{m} has order {}", m.order())));
        }
    }
    for (m, _) in y.terms() {
        if m.count(Var::R) != m.count(Var::Q) + 1 {
            return Err(violation(n, 3, format!("{m} is unbalanced")));
        }
    }
    let mut common = None;
    for (m, c) in y.terms() {
        let k = m.derivative_count() as i64;
        let base = &sign(k) * &two_i().pow((k - 2 * n as i64 - 1) as i32);
        let ratio = c / &base;
        let Some(s) = integer_sign(&ratio) else {
            return Err(violation(n, 4, format!("{m} has coefficient {c}, ratio {ratio}")));
        };
        if *common.get_or_insert(s) != s {
            return Err(violation(n, 4, format!("{m} has ratio {ratio} of the opposite sign")));
        }
    }
    let coefficient_sign = common.unwrap_or(1);
    let actual = y.coeff(&Monomial::new(vec![Factor::r(n as u32)]));
    let stated = -two_i().pow(-(n as i32));
    let shifted = -two_i().pow(-(n as i32 + 1));
    Ok(YReport {
        n,
        terms: y.len(),
        order,
        items_passed: [true; 4],
        coefficient_sign,
        coefficient_sign_positive: coefficient_sign > 0,
        single_factor: SingleFactorReport {
            matches_stated: actual == stated,
            matches_shifted: actual == shifted,
            actual,
            stated,
            shifted,
        },
    })
}

/// Euler operator `Σ_k (-1)^k ∂_x^k ∂p/∂(∂_x^k var)`.
pub fn variational_derivative(p: &DiffPoly, var: Var) -> DiffPoly {
    let mut out = DiffPoly::zero();
    let Some(top) = p.max_order(var) else {
        return out;
    };
    for k in 0..=top {
        let part = p.partial(Factor::new(var, k));
        if part.is_zero() {
            continue;
        }
        out = &out + &part.dx_n(k).scale(&sign(k as i64));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// `n` odd: `i q_τ + sign ∂^{2j} q = N`
    Schrodinger,
    /// `n` even: `q_τ + sign ∂^{n+1} q = N`
    Mkdv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearPart {
    pub order: u32,
    pub sign: i32,
}

/// A hierarchy member normalized with time `τ = time_scale · t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Equation {
    pub n: usize,
    pub j: usize,
    pub parity: Parity,
    pub alpha: GaussianRational,
    pub time_scale: GaussianRational,
    pub linear: LinearPart,
    pub nonlinearity: DiffPoly,
    /// `P` with `N = (-1)^j ∂_x P` (Schrödinger) or `N = ∂_x P` (mKdV).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flux: Option<DiffPoly>,
    pub gauged: bool,
}

impl Equation {
    /// Right side `W` of `i q_t = W` in the original time variable.
    pub fn raw_rhs(&self) -> DiffPoly {
        let lin = DiffPoly::q(self.linear.order).scale(&GaussianRational::from_int(-self.linear.sign as i64));
        let body = &lin + &self.nonlinearity;
        match self.parity {
            Parity::Schrodinger => body.scale(&self.time_scale),
            Parity::Mkdv => body.scale(&(&GaussianRational::i() * &self.time_scale)),
        }
    }

    /// `q_t` as a differential polynomial.
    pub fn time_derivative(&self) -> DiffPoly {
        self.raw_rhs().scale(&-GaussianRational::i())
    }

    pub fn is_phase_balanced(&self) -> bool {
        self.nonlinearity.terms().all(|(m, _)| m.is_phase_balanced())
    }

    pub fn common_order(&self) -> Option<u32> {
        self.nonlinearity.homogeneous_order()
    }

    /// Every nonlinear monomial scales like `∂^{2j} q` under `λ^{1/2} q(λx)`.
    pub fn is_scale_invariant(&self) -> bool {
        let target = self.linear.order as usize;
        self.nonlinearity
            .terms()
            .all(|(m, _)| m.degree() % 2 == 1 && (m.degree() - 1) / 2 + m.derivative_count() as usize == target)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("Equation serializes")
    }
}

pub fn is_power_of_two_alpha(n: usize, alpha: &GaussianRational) -> bool {
    *alpha == GaussianRational::from_int(1i64 << n)
}

fn mismatch(found: &GaussianRational, detail: &str) -> AlgebraError {
    AlgebraError::NormalizationMismatch {
        found: found.to_compact(),
        detail: detail.to_string(),
    }
}

/// Builds `i q_t = 2α ∂_x δ(q Y_n)/δr` and normalizes it to canonical form.
pub fn build_hierarchy_equation(n: usize, alpha: &GaussianRational) -> Result<Equation, AlgebraError> {
    let v = variational_derivative(&hamiltonian_density(n), Var::R);
    let w = v.dx().scale(&alpha.scale_int(2));
    let order = n as u32 + 1;
    let linear = w.filter(|m| m.degree() == 1);
    let w_nl = w.filter(|m| m.degree() > 1);
    let lin_mono = Monomial::new(vec![Factor::q(order)]);
    let mu = linear.coeff(&lin_mono);
    if linear.len() > 1 || (linear.len() == 1 && mu.is_zero()) {
        return Err(mismatch(&mu, "unexpected linear terms"));
    }
    if mu.is_zero() {
        return Err(mismatch(&mu, "vanishing linear coefficient"));
    }
    let flux = v
        .filter(|m| m.degree() > 1)
        .scale(&(&sign(n as i64 + 1) * &two_i().pow(n as i32 + 1)));
    let (parity, j, lin_sign, rho, nonlinearity) = if n % 2 == 1 {
        let j = n.div_ceil(2);
        let s: i32 = if j % 2 == 1 { 1 } else { -1 };
        let rho = &mu * &GaussianRational::from_int(-s as i64);
        if !rho.is_real() {
            return Err(mismatch(&rho, "complex time scale"));
        }
        if is_power_of_two_alpha(n, alpha) && rho != GaussianRational::one() {
            return Err(mismatch(&rho, "alpha = 2^n must give unit time scale"));
        }
        let nl = w_nl.scale(&rho.inv());
        (Parity::Schrodinger, j, s, rho, nl)
    } else {
        let rho = &mu * &-GaussianRational::i();
        if !rho.is_real() {
            return Err(mismatch(&rho, "complex time scale"));
        }
        let nl = w_nl.scale(&(&-GaussianRational::i() / &rho));
        (Parity::Mkdv, n / 2, -1, rho, nl)
    };
    Ok(Equation {
        n,
        j,
        parity,
        alpha: alpha.clone(),
        time_scale: rho,
        linear: LinearPart { order, sign: lin_sign },
        nonlinearity,
        flux: Some(flux),
        gauged: false,
    })
}

/// Coefficients of `(∂^a q)(∂^b q) r` in `W` (`i q_t = W`), keyed by `min(a, b)`.
pub fn extract_bad_cubics(eq: &Equation) -> BTreeMap<u32, GaussianRational> {
    let w = eq.raw_rhs();
    let mut out = BTreeMap::new();
    for (m, c) in w.terms() {
        let f = m.factors();
        if f.len() == 3 && f[2] == Factor::r(0) && f[0].var == Var::Q && f[1].var == Var::Q {
            out.insert(f[0].order.min(f[1].order), c.clone());
        }
    }
    out
}

fn binomial(n: u32, k: u32) -> i64 {
    num_integer::binomial(n as i64, k as i64)
}

fn delta(a: u32, b: u32) -> i64 {
    (a == b) as i64
}

/// `4(-1)^{n+1} α (2i)^{-(n+2)} (C(n+2, k+1) - δ_{0k} - δ_{nk})`.
pub fn predicted_bad_cubic_coefficient(n: u32, k: u32, alpha: &GaussianRational) -> GaussianRational {
    let pre = &(&sign(n as i64 + 1) * &alpha.scale_int(4)) * &two_i().pow(-(n as i32 + 2));
    pre.scale_int(binomial(n + 2, k + 1) - delta(0, k) - delta(n, k))
}

/// Per-term coefficient of a merged monomial: half the sum over ordered `k` that map to it.
pub fn merge_symmetric<F: Fn(u32) -> GaussianRational>(n: u32, key: u32, f: F) -> GaussianRational {
    let half = GaussianRational::from_frac(1, 2);
    if key == n - key {
        &f(key) * &half
    } else {
        &(&f(key) + &f(n - key)) * &half
    }
}

pub fn predicted_merged_bad_cubic(n: u32, key: u32, alpha: &GaussianRational) -> GaussianRational {
    merge_symmetric(n, key, |k| predicted_bad_cubic_coefficient(n, k, alpha))
}

/// Predicted map in the shape returned by [`extract_bad_cubics`]; zero entries omitted.
pub fn predicted_bad_cubics(n: u32, alpha: &GaussianRational) -> BTreeMap<u32, GaussianRational> {
    (0..=n / 2)
        .map(|key| (key, predicted_merged_bad_cubic(n, key, alpha)))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}
