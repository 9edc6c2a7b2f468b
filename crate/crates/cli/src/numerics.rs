use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufReader, Write};

use dnls_analysis::{
    gauge_lipschitz_probe, growth_exponent_fit, hat_norm, hat_norm_spectrum, modulation_norm, modulation_norm_spectrum,
    packet_datum, resonance_ratio_stats, PacketSpec,
};
use dnls_core::{build_hierarchy_equation, derive_gauged};
use dnls_spectral::{
    compile_evaluator, plane_wave_nonlinearity, plane_wave_reference, read_snapshot, simulate_with_reference, write_monitor_csv,
    write_snapshot, Dealias, Field, Grid, Integrator, SimConfig, MASS,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::{default_alpha, parse_alpha};
use crate::options::{InitialDatum, IntegratorArg, Options};
use crate::output::{exponent, Artifacts};
use crate::{usage, Outcome};

/// Largest fitted-minus-predicted exponent gap accepted by `picard`.
pub const GROWTH_TOLERANCE: f64 = 0.15;

fn positive(name: &str, x: f64) -> anyhow::Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(usage(format!("--{name} must be positive, got {x}")))
    }
}

fn index_j(opts: &Options, default: usize) -> anyhow::Result<usize> {
    let j = opts.j.unwrap_or(default);
    if j == 0 {
        return Err(usage("--j must be at least 1"));
    }
    Ok(j)
}

fn initial_datum(kind: InitialDatum, grid: Grid, seed: u64, j: usize, n: i64, s: f64) -> Field {
    let kappa = 2.0 * PI / grid.length();
    let e = |k: f64, x: f64| Complex64::new(0.0, k * kappa * x).exp();
    match kind {
        InitialDatum::Trig => Field::from_fn(grid, |x| 0.3 * e(1.0, x) + 0.2 * e(-2.0, x) + 0.1 * e(3.0, x)),
        InitialDatum::Gaussian => {
            let (c, w) = (grid.length() / 2.0, grid.length() / 20.0);
            Field::from_fn(grid, |x| Complex64::new(0.3 * (-((x - c) / w).powi(2)).exp(), 0.0))
        }
        InitialDatum::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c: Vec<Complex64> = (0..grid.points())
                .map(|k| {
                    let w = 0.1 * (-(grid.mode(k).abs() as f64) / 2.0).exp();
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * w
                })
                .collect();
            Field::from_coefficients(grid, &c)
        }
        InitialDatum::PlaneWave => plane_wave_reference(grid, j, n, Complex64::new(1.0, 0.0), s, 0.0),
    }
}

pub fn simulate(opts: &Options) -> Outcome {
    let j = index_j(opts, 1)?;
    let n = 2 * j - 1;
    let points = opts.grid.unwrap_or(256);
    let length = positive("length", opts.length.unwrap_or(2.0 * PI))?;
    let dt = positive("dt", opts.dt.unwrap_or(1e-3))?;
    let t_end = positive("t-end", opts.t_end.unwrap_or(0.1))?;
    let initial = opts.initial.unwrap_or(InitialDatum::Trig);
    let integrator = match opts.integrator.unwrap_or(IntegratorArg::Etdrk4) {
        IntegratorArg::Ifrk4 => Integrator::Ifrk4,
        IntegratorArg::Etdrk4 => Integrator::Etdrk4,
    };
    let alpha = parse_alpha(opts, n)?;
    if alpha != default_alpha(n)? {
        return Err(usage("simulate integrates the member normalized with alpha = 2^n"));
    }
    let mut monitors = opts.monitors.clone().unwrap_or_else(|| {
        let mut m = vec![MASS];
        m.extend([2 * j as i64 - 2, 2 * j as i64 - 1].into_iter().filter(|&k| k >= 1));
        m
    });
    if let Some(bad) = monitors.iter().find(|&&k| k < MASS) {
        return Err(usage(format!("monitor index {bad} is below -1")));
    }
    monitors.dedup();
    let seed = opts.seed.unwrap_or(0);
    let plane_n = opts.n_list.as_ref().and_then(|l| l.first().copied()).unwrap_or(4.0);
    let plane_s = opts.s.unwrap_or(1.0);
    if initial == InitialDatum::PlaneWave && (plane_n.fract() != 0.0 || plane_n == 0.0) {
        return Err(usage("the plane-wave datum needs a nonzero integer mode in --N-list"));
    }
    if initial == InitialDatum::PlaneWave && opts.gauged {
        return Err(usage("--gauged does not apply to the plane-wave model equation"));
    }
    let dealias = Dealias {
        fraction: opts.dealias.unwrap_or(2.0 / 3.0),
        padding: 0,
    };
    let cfg = SimConfig {
        j,
        dt,
        t_end,
        dealias,
        integrator,
        monitors,
        monitor_every: opts.monitor_every.unwrap_or(1),
        snapshot_every: opts.snapshot_every,
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let grid = Grid::new(points, length).map_err(|e| usage(e.to_string()))?;
    let mut resolved = json!({
        "j": j, "n": n, "alpha": alpha, "grid": points, "length": length, "gauged": opts.gauged,
        "initial": initial, "seed": seed, "sim": cfg,
    });
    if initial == InitialDatum::PlaneWave {
        resolved["plane_wave"] = json!({ "N": plane_n, "s": plane_s, "a": 1.0 });
    }
    let out = Artifacts::open("simulate", opts, resolved)?;

    let u0 = initial_datum(initial, grid, seed, j, plane_n as i64, plane_s);
    let nonlinearity = if initial == InitialDatum::PlaneWave {
        plane_wave_nonlinearity(j)?
    } else {
        let eq = build_hierarchy_equation(n, &alpha)?;
        if opts.gauged {
            derive_gauged(&eq)?.gauged.nonlinearity
        } else {
            eq.nonlinearity
        }
    };
    let mut ev = compile_evaluator(&nonlinearity, grid, dealias)?;
    let reference = |t: f64| plane_wave_reference(grid, j, plane_n as i64, Complex64::new(1.0, 0.0), plane_s, t);
    let reference: Option<&dyn Fn(f64) -> Field> = (initial == InitialDatum::PlaneWave).then_some(&reference as _);
    let tr = simulate_with_reference(&cfg, &u0, &mut ev, reference)?;

    let mut csv = out.create("simulate.csv")?;
    write_monitor_csv(&mut csv, &tr.monitors)?;
    csv.flush()?;
    let mut snap = out.create("final.snap")?;
    write_snapshot(&mut snap, &tr.final_state, j)?;
    snap.flush()?;
    for (k, f) in tr.snapshots.iter().enumerate() {
        let mut w = out.create(&format!("snapshot_{k:05}.snap"))?;
        write_snapshot(&mut w, f, j)?;
        w.flush()?;
    }
    let drifts: Vec<_> = cfg
        .monitors
        .iter()
        .filter(|&&k| k >= 0)
        .map(|&k| json!({ "index": k, "relative_drift": tr.relative_drift(k) }))
        .collect();
    let summary = json!({
        "steps": tr.steps,
        "final_time": tr.final_state.time,
        "mass_drift": tr.mass_drift(),
        "drifts": drifts,
        "final_l2_error": tr.monitors.last().and_then(|m| m.l2_error),
        "snapshots": tr.snapshots.len(),
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    out.write_json("simulate.json", &summary)?;
    Ok(true)
}

pub fn picard(opts: &Options) -> Outcome {
    let j = index_j(opts, 2)?;
    let s = opts.s.unwrap_or(0.5);
    let r = opts.r.unwrap_or(2.0);
    let n_list = opts.n_list.clone().unwrap_or_else(|| vec![16.0, 32.0, 64.0, 128.0, 256.0]);
    let out = Artifacts::open("picard", opts, json!({ "j": j, "s": s, "r": exponent(r), "N": n_list }))?;
    let fit = growth_exponent_fit(j, s, r, &n_list).map_err(|e| match e {
        dnls_analysis::AnalysisError::InvalidParameter(m) => usage(m),
        e => e.into(),
    })?;
    let mut csv = String::from("N,gamma,lattice_points,t,input_norm,output_norm\n");
    for p in &fit.points {
        csv.push_str(&format!("{},{},{},{:e},{:e},{:e}\n", p.n, p.gamma, p.lattice_points, p.t, p.input_norm, p.output_norm));
    }
    out.write("picard.csv", &csv)?;
    out.write_json("picard.json", &fit)?;
    let ok = fit.deviation() <= GROWTH_TOLERANCE;
    println!(
        "fitted exponent {:.4} (stderr {:.4}), predicted {:.4}, deviation {:.4}: {}",
        fit.fit.slope,
        fit.fit.slope_stderr,
        fit.predicted,
        fit.deviation(),
        if ok { "within tolerance" } else { "outside tolerance" }
    );
    Ok(ok)
}

pub fn norms(opts: &Options) -> Outcome {
    if opts.probe {
        let s = opts.s.unwrap_or(0.6);
        let p = opts.p.unwrap_or(4.0);
        let radius = positive("radius", opts.radius.unwrap_or(0.1))?;
        let trials = opts.trials.unwrap_or(200);
        let seed = opts.seed.unwrap_or(0);
        let out = Artifacts::open("norms", opts, json!({ "probe": true, "s": s, "p": exponent(p), "radius": radius, "trials": trials, "seed": seed }))?;
        let probe = gauge_lipschitz_probe(s, p, radius, trials, seed)?;
        println!("{}", serde_json::to_string_pretty(&probe)?);
        out.write_json("norms.json", &probe)?;
        return Ok(probe.max_ratio.is_finite());
    }
    let s = opts.s.unwrap_or(0.0);
    let r = opts.r.unwrap_or(2.0);
    let p = opts.p.unwrap_or(2.0);
    if r.is_nan() || r <= 1.0 || p.is_nan() || p < 1.0 {
        return Err(usage("need r > 1 and p >= 1"));
    }
    if let Some(path) = &opts.input {
        let out = Artifacts::open("norms", opts, json!({ "input": path, "s": s, "r": exponent(r), "p": exponent(p) }))?;
        let file = File::open(path).map_err(|e| usage(format!("cannot open {}: {e}", path.display())))?;
        let (field, j) = read_snapshot(&mut BufReader::new(file))?;
        let report = json!({
            "j": j,
            "time": field.time,
            "grid": field.grid.points(),
            "length": field.grid.length(),
            "l2": field.l2_norm(),
            "fourier_lebesgue": hat_norm(&field, s, r),
            "modulation": modulation_norm(&field, s, p),
        });
        println!("{}", serde_json::to_string_pretty(&report)?);
        out.write_json("norms.json", &report)?;
        return Ok(true);
    }
    let j = index_j(opts, 2)?;
    let n_list = opts.n_list.clone().unwrap_or_else(|| vec![16.0, 32.0, 64.0, 128.0, 256.0]);
    let out = Artifacts::open("norms", opts, json!({ "packets": true, "j": j, "s": s, "r": exponent(r), "p": exponent(p), "N": n_list }))?;
    let mut rows = Vec::new();
    for &n in &n_list {
        let spec = PacketSpec::new(j, n, s, r);
        spec.validate().map_err(|e| usage(e.to_string()))?;
        let sp = packet_datum(&spec, spec.default_dxi())?;
        rows.push(json!({
            "N": n,
            "gamma": spec.gamma,
            "amplitude": spec.amplitude(),
            "lattice_points": sp.len(),
            "fourier_lebesgue": hat_norm_spectrum(&sp, s, r),
            "modulation": modulation_norm_spectrum(&sp, s, p),
            "l2": sp.l2_norm(),
        }));
    }
    let report = json!({ "packets": rows });
    println!("{}", serde_json::to_string_pretty(&report)?);
    out.write_json("norms.json", &report)?;
    Ok(true)
}

pub fn resonance(opts: &Options) -> Outcome {
    let j = index_j(opts, 2)?;
    let count = opts.count.unwrap_or(1_000_000);
    let seed = opts.seed.unwrap_or(0);
    let radius = positive("radius", opts.radius.unwrap_or(1.0))?;
    let out = Artifacts::open("resonance", opts, json!({ "j": j, "count": count, "seed": seed, "radius": radius }))?;
    let stats = resonance_ratio_stats(j, count, seed, radius)?;
    println!("{}", serde_json::to_string_pretty(&stats)?);
    out.write_json("resonance.json", &stats)?;
    Ok(stats.kept > 0 && stats.min > 0.0)
}
