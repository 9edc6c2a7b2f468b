use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conserved::{conserved_functional, ConservedFunctional};
use crate::error::SpectralError;
use crate::evaluator::{Dealias, NonlinearEvaluator};
use crate::grid::{Field, Grid, Transform};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    /// Integrating-factor (interaction picture) RK4.
    Ifrk4,
    /// Cox–Matthews exponential time differencing RK4, coefficients by contour integrals.
    Etdrk4,
}

impl std::str::FromStr for Integrator {
    type Err = SpectralError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ifrk4" => Ok(Integrator::Ifrk4),
            "etdrk4" => Ok(Integrator::Etdrk4),
            _ => Err(SpectralError::Config(format!("unknown integrator `{s}`"))),
        }
    }
}

/// Solves `i u_t + (-1)^{j+1} ∂^{2j} u = N(u)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub j: usize,
    pub dt: f64,
    pub t_end: f64,
    pub dealias: Dealias,
    pub integrator: Integrator,
    /// Conserved functional indices; `-1` is the mass.
    pub monitors: Vec<i64>,
    /// Record monitors every this many steps (and at the end).
    pub monitor_every: usize,
    /// Keep a snapshot every this many steps, if set.
    pub snapshot_every: Option<usize>,
}

impl SimConfig {
    pub fn new(j: usize, dt: f64, t_end: f64) -> Self {
        Self {
            j,
            dt,
            t_end,
            dealias: Dealias::default(),
            integrator: Integrator::Etdrk4,
            monitors: vec![-1],
            monitor_every: 1,
            snapshot_every: None,
        }
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        if self.j == 0 {
            return Err(SpectralError::Config("j must be positive".into()));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(SpectralError::Config(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(SpectralError::Config(format!("t_end = {} must be non-negative", self.t_end)));
        }
        if self.monitor_every == 0 || self.snapshot_every == Some(0) {
            return Err(SpectralError::Config("sampling intervals must be positive".into()));
        }
        if self.monitors.iter().any(|&n| n < -1) {
            return Err(SpectralError::Config("monitor indices start at -1".into()));
        }
        self.dealias.validate()
    }

    /// Number of steps and the step actually used (`t_end` is hit exactly).
    pub fn steps(&self) -> (usize, f64) {
        let n = (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize;
        if n == 0 {
            (0, self.dt)
        } else {
            (n, self.t_end / n as f64)
        }
    }
}

/// `-i ξ^{2j}` per FFT slot.
pub fn linear_symbol(grid: Grid, j: usize) -> Vec<Complex64> {
    grid.wavenumbers()
        .iter()
        .map(|xi| Complex64::new(0.0, -xi.powi(2 * j as i32)))
        .collect()
}

/// Exact linear flow: mode `ξ` is multiplied by `e^{-i ξ^{2j} t}`.
pub fn linear_propagate(f: &Field, j: usize, t: f64) -> Field {
    let sym = linear_symbol(f.grid, j);
    let mut c = f.coefficients();
    for (z, l) in c.iter_mut().zip(&sym) {
        *z *= (l * t).exp();
    }
    let mut out = Field::from_coefficients(f.grid, &c);
    out.time = f.time + t;
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonitorSample {
    pub time: f64,
    pub mass: f64,
    /// `(index, value)` per configured functional.
    pub values: Vec<(i64, Complex64)>,
    pub l2_error: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub final_state: Field,
    pub snapshots: Vec<Field>,
    pub monitors: Vec<MonitorSample>,
    pub steps: usize,
    pub dt: f64,
}

impl Trajectory {
    /// Largest `|I(t) - I(0)| / |I(0)|` for a monitored index (absolute if `I(0) = 0`).
    pub fn relative_drift(&self, index: i64) -> Option<f64> {
        let series: Vec<Complex64> = self
            .monitors
            .iter()
            .filter_map(|s| s.values.iter().find(|(n, _)| *n == index).map(|(_, v)| *v))
            .collect();
        let first = *series.first()?;
        let scale = if first.norm() > 0.0 { first.norm() } else { 1.0 };
        Some(series.iter().map(|v| (v - first).norm() / scale).fold(0.0, f64::max))
    }

    /// Largest absolute mass change.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.monitors.first().map(|s| s.mass).unwrap_or(0.0);
        self.monitors.iter().map(|s| (s.mass - m0).abs()).fold(0.0, f64::max)
    }
}

struct Stepper {
    integrator: Integrator,
    e: Vec<Complex64>,
    e2: Vec<Complex64>,
    q: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    f3: Vec<Complex64>,
    h: f64,
}

const CONTOUR_POINTS: usize = 32;

impl Stepper {
    fn new(integrator: Integrator, sym: &[Complex64], h: f64) -> Self {
        let e: Vec<_> = sym.iter().map(|l| (l * h).exp()).collect();
        let e2: Vec<_> = sym.iter().map(|l| (l * h / 2.0).exp()).collect();
        let (mut q, mut f1, mut f2, mut f3) = (vec![], vec![], vec![], vec![]);
        if integrator == Integrator::Etdrk4 {
            let roots: Vec<Complex64> = (1..=CONTOUR_POINTS)
                .map(|m| Complex64::new(0.0, PI * (m as f64 - 0.5) / CONTOUR_POINTS as f64).exp())
                .collect();
            for l in sym {
                let (mut sq, mut s1, mut s2, mut s3) = (Complex64::default(), Complex64::default(), Complex64::default(), Complex64::default());
                for r in &roots {
                    // upper half circle plus its conjugate: the full contour for real-symmetric sums
                    for z in [*r, r.conj()] {
                        let lr = l * h + z;
                        let ex = lr.exp();
                        sq += ((lr / 2.0).exp() - 1.0) / lr;
                        s1 += (-4.0 - lr + ex * (4.0 - 3.0 * lr + lr * lr)) / lr.powu(3);
                        s2 += (2.0 + lr + ex * (lr - 2.0)) / lr.powu(3);
                        s3 += (-4.0 - 3.0 * lr - lr * lr + ex * (4.0 - lr)) / lr.powu(3);
                    }
                }
                let w = h / (2 * CONTOUR_POINTS) as f64;
                q.push(sq * w);
                f1.push(s1 * w);
                f2.push(s2 * w);
                f3.push(s3 * w);
            }
        }
        Self {
            integrator,
            e,
            e2,
            q,
            f1,
            f2,
            f3,
            h,
        }
    }

    fn step(&self, v: &mut [Complex64], rhs: &mut dyn FnMut(&[Complex64]) -> Vec<Complex64>) {
        let h = self.h;
        let n = v.len();
        match self.integrator {
            Integrator::Ifrk4 => {
                let k1 = rhs(v);
                let a: Vec<_> = (0..n).map(|i| self.e2[i] * (v[i] + 0.5 * h * k1[i])).collect();
                let k2 = rhs(&a);
                let b: Vec<_> = (0..n).map(|i| self.e2[i] * v[i] + 0.5 * h * k2[i]).collect();
                let k3 = rhs(&b);
                let c: Vec<_> = (0..n).map(|i| self.e[i] * v[i] + h * self.e2[i] * k3[i]).collect();
                let k4 = rhs(&c);
                for i in 0..n {
                    v[i] = self.e[i] * v[i]
                        + h / 6.0 * (self.e[i] * k1[i] + 2.0 * self.e2[i] * (k2[i] + k3[i]) + k4[i]);
                }
            }
            Integrator::Etdrk4 => {
                let nu = rhs(v);
                let a: Vec<_> = (0..n).map(|i| self.e2[i] * v[i] + self.q[i] * nu[i]).collect();
                let na = rhs(&a);
                let b: Vec<_> = (0..n).map(|i| self.e2[i] * v[i] + self.q[i] * na[i]).collect();
                let nb = rhs(&b);
                let c: Vec<_> = (0..n)
                    .map(|i| self.e2[i] * a[i] + self.q[i] * (2.0 * nb[i] - nu[i]))
                    .collect();
                let nc = rhs(&c);
                for i in 0..n {
                    v[i] = self.e[i] * v[i]
                        + nu[i] * self.f1[i]
                        + 2.0 * (na[i] + nb[i]) * self.f2[i]
                        + nc[i] * self.f3[i];
                }
            }
        }
    }
}

pub fn simulate(cfg: &SimConfig, u0: &Field, nl: &mut NonlinearEvaluator) -> Result<Trajectory, SpectralError> {
    simulate_with_reference(cfg, u0, nl, None)
}

/// As [`simulate`], additionally recording the L² error against `reference(t)`.
pub fn simulate_with_reference(
    cfg: &SimConfig,
    u0: &Field,
    nl: &mut NonlinearEvaluator,
    reference: Option<&dyn Fn(f64) -> Field>,
) -> Result<Trajectory, SpectralError> {
    cfg.validate()?;
    if nl.grid() != u0.grid {
        return Err(SpectralError::Config("evaluator and initial datum use different grids".into()));
    }
    if !u0.is_finite() {
        return Err(SpectralError::BlowupDetected { time: u0.time });
    }
    let grid = u0.grid;
    let (steps, h) = cfg.steps();
    let sym = linear_symbol(grid, cfg.j);
    let stepper = Stepper::new(cfg.integrator, &sym, h);
    let mut monitors: Vec<ConservedFunctional> = cfg.monitors.iter().map(|&n| conserved_functional(n, grid)).collect();
    let mut transform = Transform::new(grid.points());
    let mut v = u0.samples.clone();
    transform.forward(&mut v);

    let mut record = |coeffs: &[Complex64], time: f64, out: &mut Vec<MonitorSample>| {
        let f = Field {
            grid,
            samples: {
                let mut s = coeffs.to_vec();
                Transform::new(grid.points()).inverse(&mut s);
                s
            },
            time,
        };
        out.push(MonitorSample {
            time,
            mass: f.mass(),
            values: monitors.iter_mut().map(|m| (m.index(), m.evaluate(&f))).collect(),
            l2_error: reference.map(|r| f.relative_l2_error(&r(time))),
        });
        f
    };

    let mut samples = Vec::new();
    let mut snapshots = Vec::new();
    let first = record(&v, u0.time, &mut samples);
    if cfg.snapshot_every.is_some() {
        snapshots.push(first);
    }
    let mut rhs = |c: &[Complex64]| -> Vec<Complex64> {
        let mut out = nl.eval_coefficients(c);
        out.iter_mut().for_each(|z| *z *= Complex64::new(0.0, -1.0));
        out
    };
    for step in 1..=steps {
        stepper.step(&mut v, &mut rhs);
        let time = u0.time + step as f64 * h;
        if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(SpectralError::BlowupDetected { time });
        }
        let snap = cfg.snapshot_every.is_some_and(|k| step % k == 0);
        if step % cfg.monitor_every == 0 || step == steps || snap {
            let f = record(&v, time, &mut samples);
            if snap {
                snapshots.push(f);
            }
        }
    }
    let mut final_state = v.clone();
    transform.inverse(&mut final_state);
    Ok(Trajectory {
        final_state: Field {
            grid,
            samples: final_state,
            time: u0.time + steps as f64 * h,
        },
        snapshots,
        monitors: samples,
        steps,
        dt: h,
    })
}
