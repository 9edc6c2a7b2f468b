use std::f64::consts::PI;

use dnls_analysis::norms::japanese;
use dnls_analysis::*;
use dnls_core::{build_hierarchy_equation, derive_gauged, Direction, GaussianRational};
use dnls_spectral::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_field(g: Grid, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Field::new(
        g,
        (0..g.points())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
        0.0,
    )
    .unwrap()
}

/// `û(ξ_k) = (2π)^{-1/2} Σ_x u(x) e^{-iξ_k x} dx` by explicit summation.
fn direct_hat(f: &Field) -> Vec<(f64, Complex64)> {
    let g = f.grid;
    let m = g.points() as i64;
    (-m / 2..m / 2)
        .map(|mode| {
            let xi = mode as f64 * g.dxi();
            let v: Complex64 = f
                .samples
                .iter()
                .enumerate()
                .map(|(i, z)| z * Complex64::new(0.0, -xi * g.x(i)).exp())
                .sum();
            (xi, v * g.dx() / (2.0 * PI).sqrt())
        })
        .collect()
}

fn direct_hat_norm(f: &Field, s: f64, r: f64) -> f64 {
    let rp = if r.is_infinite() { 1.0 } else { r / (r - 1.0) };
    let dxi = f.grid.dxi();
    direct_hat(f)
        .iter()
        .map(|(xi, v)| dxi * ((1.0 + xi * xi).powf(s / 2.0) * v.norm()).powf(rp))
        .sum::<f64>()
        .powf(1.0 / rp)
}

fn direct_modulation_norm(f: &Field, s: f64, p: f64) -> f64 {
    let dxi = f.grid.dxi();
    let hat = direct_hat(f);
    let lo = (hat[0].0 - 1.0).floor() as i64;
    let hi = (hat[hat.len() - 1].0 + 1.0).ceil() as i64;
    let mut total = 0.0;
    let mut max = 0.0f64;
    for n in lo..=hi {
        let e: f64 = hat
            .iter()
            .filter(|(xi, _)| *xi >= n as f64 - 0.5 && *xi < n as f64 + 0.5)
            .map(|(_, v)| dxi * v.norm_sqr())
            .sum();
        let w = (1.0 + (n * n) as f64).powf(s / 2.0) * e.sqrt();
        total += w.powf(p);
        max = max.max(w);
    }
    if p.is_infinite() {
        max
    } else {
        total.powf(1.0 / p)
    }
}

#[test]
fn norms_match_direct_definitions() {
    for (m, len, seed) in [(32usize, 2.0 * PI, 1u64), (64, 20.0, 2), (128, 7.5, 3)] {
        let g = Grid::new(m, len).unwrap();
        let f = random_field(g, seed);
        for (s, r) in [(0.0, 2.0), (0.5, 3.0), (1.0, f64::INFINITY), (-0.3, 1.5)] {
            let a = hat_norm(&f, s, r);
            let b = direct_hat_norm(&f, s, r);
            assert!((a - b).abs() < 1e-10 * b, "hat ({s}, {r}): {a} vs {b}");
        }
        for (s, p) in [(0.0, 2.0), (0.6, 4.0), (1.0, 1.0), (0.5, f64::INFINITY)] {
            let a = modulation_norm(&f, s, p);
            let b = direct_modulation_norm(&f, s, p);
            assert!((a - b).abs() < 1e-10 * b, "mod ({s}, {p}): {a} vs {b}");
        }
        assert!((hat_norm(&f, 0.0, 2.0) - f.l2_norm()).abs() < 1e-10 * f.l2_norm());
        assert!((modulation_norm(&f, 0.0, 2.0) - f.l2_norm()).abs() < 1e-10 * f.l2_norm());
    }
}

#[test]
fn single_box_modulation_norm() {
    // modes 29..=31 on L = 20π sit at ξ = 2.9, 3.0, 3.1, all in box 3
    let g = Grid::new(128, 20.0 * PI).unwrap();
    let f = Field::from_fn(g, |x| {
        (29..=31)
            .map(|k| Complex64::new(0.0, k as f64 * 0.1 * x).exp() * (k - 28) as f64)
            .sum()
    });
    let e = f.l2_norm();
    for (s, p) in [(0.0, 1.0), (1.5, 2.0), (-1.0, 7.0)] {
        assert!((modulation_norm(&f, s, p) - japanese(3.0).powf(s) * e).abs() < 1e-10 * e);
    }
}

#[test]
fn modulation_embedding_holds_on_random_band_limited_fields() {
    let g = Grid::new(256, 16.0 * PI).unwrap();
    let cases = [(0.0, 2.0, 1.0, 4.0), (0.2, 1.0, 1.5, 2.0), (-0.5, 3.0, 0.5, 6.0)];
    for (s1, q1, s2, q2) in cases {
        let c = modulation_embedding_constant(s1, q1, s2, q2).unwrap();
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let band = rng.gen_range(2.0..15.0);
            let mut coeffs = random_field(g, seed + 100).coefficients();
            for (k, z) in coeffs.iter_mut().enumerate() {
                if g.wavenumber(k).abs() > band {
                    *z = Complex64::new(0.0, 0.0);
                }
            }
            let f = Field::from_coefficients(g, &coeffs);
            let lhs = modulation_norm(&f, s1, q1);
            let rhs = modulation_norm(&f, s2, q2);
            assert!(lhs <= c * rhs * (1.0 + 1e-12), "({s1},{q1}) vs ({s2},{q2}): {lhs} > {c}·{rhs}");
        }
    }
}

#[test]
fn packet_normalization_and_mass() {
    for n in [16.0, 64.0, 256.0] {
        for (j, s, r) in [(2usize, 0.5, 2.0), (2, 1.0, 3.0), (3, 1.0, 2.0)] {
            let spec = PacketSpec::new(j, n, s, r);
            let sp = packet_datum(&spec, spec.default_dxi()).unwrap();
            let norm = hat_norm_spectrum(&sp, s, r);
            assert!((norm - 1.0).abs() < 0.02, "N = {n}: {norm}");
            assert!(sp.iter().all(|(xi, _)| xi >= n && xi < n + spec.gamma));
        }
    }
    // direct quadrature on a grid whose modes contain the lattice
    let spec = PacketSpec::new(2, 16.0, 0.75, 2.0);
    let dxi = spec.default_dxi();
    let sp = packet_datum(&spec, dxi).unwrap();
    let grid = Grid::new(32768, 2.0 * PI / dxi).unwrap();
    let f = sp.to_field(grid).unwrap();
    let expect = spec.gamma.powf(1.0 - 2.0 / 2.0) * 16f64.powf(-1.5);
    assert!((f.mass() - expect).abs() < 1e-10 * expect);
    let outside = Spectrum::from_field(&f)
        .iter()
        .filter(|(xi, _)| *xi < 16.0 - 1e-9 || *xi >= 16.0 + spec.gamma)
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    assert!(outside < 1e-12);
}

#[test]
fn picard_single_mode_closed_form() {
    let g = Grid::periodic(16).unwrap();
    let a = Complex64::new(0.7, -0.4);
    let n = 3.0;
    let f = Field::from_fn(g, |x| a * Complex64::new(0.0, n * x).exp());
    let phi = Spectrum::from_field(&f);
    for j in [1usize, 2, 3] {
        let cubic = hierarchy_cubic(j).unwrap();
        let m = CubicSymbol::new(&cubic).unwrap().eval(n, n, n);
        let t = 0.013;
        let out = picard3(j, &cubic, &phi, t).unwrap();
        let hat = a * g.length() / (2.0 * PI).sqrt();
        let phase = Complex64::new(0.0, -n.powi(2 * j as i32) * t).exp();
        let expect = Complex64::new(0.0, -1.0) * phase * g.dxi().powi(2) / (2.0 * PI) * m * t * hat.norm_sqr() * hat;
        for (xi, v) in out.iter() {
            if (xi - n).abs() < 1e-12 {
                assert!((v - expect).norm() < 1e-12 * expect.norm(), "j = {j}: {v} vs {expect}");
            } else {
                assert!(v.norm() < 1e-12 * expect.norm());
            }
        }
    }
    assert!((CubicSymbol::new(&hierarchy_cubic(2).unwrap()).unwrap().eval(n, n, n) - Complex64::new(-6.0 * n.powi(3), 0.0)).norm() < 1e-12);
}

#[test]
fn picard_on_a_grid_matches_the_first_order_duhamel_term() {
    // for t → 0 the iterate is -i t N₃(φ)
    let g = Grid::periodic(16).unwrap();
    let mut c = vec![Complex64::new(0.0, 0.0); 16];
    c[1] = Complex64::new(0.3, 0.1);
    c[g.slot(-2)] = Complex64::new(-0.2, 0.05);
    c[3] = Complex64::new(0.1, -0.1);
    let f = Field::from_coefficients(g, &c);
    let cubic = hierarchy_cubic(2).unwrap();
    let mut ev = NonlinearEvaluator::compile_any(&cubic, g, Dealias::exact()).unwrap();
    let n3 = Spectrum::from_field(&ev.eval(&f));
    let t = 1e-9;
    let out = picard3(2, &cubic, &Spectrum::from_field(&f), t).unwrap();
    let scale = t * n3.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (xi, v) in out.iter() {
        let mode = (xi / g.dxi()).round() as i64;
        if mode.abs() > 7 {
            continue;
        }
        let reference = n3.values[(mode + 8) as usize];
        let expect = Complex64::new(0.0, -t) * reference;
        assert!((v - expect).norm() < 1e-4 * scale, "ξ = {xi}: {v} vs {expect}");
    }
}

#[test]
fn growth_rate_quick_check() {
    let fit = growth_exponent_fit(2, 0.5, 2.0, &[16.0, 32.0, 64.0, 128.0]).unwrap();
    assert!(fit.deviation() < 0.15, "{fit:?}");
    assert!(growth_exponent_fit(2, 0.5, 2.0, &[16.0, 32.0, 64.0]).is_err());
}

#[test]
fn packet_resonance_stays_order_one() {
    for j in [2usize, 3] {
        for n in [16.0, 256.0] {
            let spec = PacketSpec::new(j, n, 1.0, 2.0);
            let sp = packet_datum(&spec, spec.default_dxi()).unwrap();
            let m = picard::max_resonance(j, &sp);
            assert!(m > 1.0 && m < 100.0, "j = {j}, N = {n}: {m}");
        }
    }
}

#[test]
fn resonance_sampling_is_bounded_below() {
    let st = resonance_ratio_stats(2, 200_000, 9, 1.0).unwrap();
    assert!(st.min > 1.0 && st.min < st.median && st.median < st.max);
    let st3 = resonance_ratio_stats(3, 200_000, 9, 5.0).unwrap();
    assert!(st3.min > 0.0);
}

#[test]
fn gauge_maps_are_inverse_and_unimodular() {
    let g = Grid::new(256, 40.0).unwrap();
    let f = Field::from_fn(g, |x| Complex64::new(0.5, 0.3) * (-((x - 20.0) / 2.5).powi(2)).exp() * Complex64::new(0.0, 1.3 * x).exp());
    let m = gauge_apply_numeric(&f, Direction::Minus).unwrap();
    let back = gauge_apply_numeric(&m, Direction::Plus).unwrap();
    assert!(back.l2_distance(&f) < 1e-10 * f.l2_norm());
    assert!(m.samples.iter().zip(&f.samples).all(|(a, b)| (a.norm() - b.norm()).abs() < 1e-15));
    assert!((m.mass() - f.mass()).abs() < 1e-14);
}

#[test]
fn gauge_commutes_with_the_flows() {
    let eq = build_hierarchy_equation(3, &GaussianRational::from_int(8)).unwrap();
    let gauged = derive_gauged(&eq).unwrap().gauged;
    let g = Grid::new(256, 64.0).unwrap();
    let u0 = Field::from_fn(g, |x| Complex64::new(0.3, 0.0) * (-((x - 32.0) / 3.0).powi(2)).exp());
    let v0 = gauge_apply_numeric(&u0, Direction::Minus).unwrap();
    let cfg = SimConfig::new(2, 1e-3, 0.05);
    let mut eu = compile_evaluator(&eq.nonlinearity, g, Dealias::default()).unwrap();
    let mut ev = compile_evaluator(&gauged.nonlinearity, g, Dealias::default()).unwrap();
    let u = simulate(&cfg, &u0, &mut eu).unwrap().final_state;
    let v = simulate(&cfg, &v0, &mut ev).unwrap().final_state;
    let gu = gauge_apply_numeric(&u, Direction::Minus).unwrap();
    assert!(gu.relative_l2_error(&v) < 1e-6);
    let other = gauge_apply_numeric(&u, Direction::Plus).unwrap();
    assert!(other.relative_l2_error(&v) > 1e-2);
}

#[test]
fn lipschitz_ratios_grow_with_the_radius() {
    let small = gauge_lipschitz_probe(0.6, 4.0, 0.1, 50, 5).unwrap();
    let large = gauge_lipschitz_probe(0.6, 4.0, 0.2, 50, 5).unwrap();
    assert!(small.max_ratio.is_finite() && small.evaluated == 50);
    assert!(large.max_ratio >= small.max_ratio);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn time_kernel_is_bounded_by_t(phi in -1e6f64..1e6, t in 0.0f64..10.0) {
        prop_assert!(time_kernel(phi, t).norm() <= t * (1.0 + 1e-12));
    }

    #[test]
    fn fourth_order_symbol_matches_closed_form(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0) {
        // with k₂ = -ξ₂ the symmetrized symbol is minus the cubic polynomial
        let sym = CubicSymbol::new(&hierarchy_cubic(2).unwrap()).unwrap();
        let (k1, k2, k3) = (a, -b, c);
        let closed = (k1 + k2 + k3) * (2.0 * k1 * k1 + k2 * k2 + 2.0 * k3 * k3 + k1 * k2 + k2 * k3 + 3.0 * k1 * k3);
        let m = sym.eval(a, b, c);
        prop_assert!((m.re + closed).abs() < 1e-10 * closed.abs().max(1.0) && m.im.abs() < 1e-10);
    }

    #[test]
    fn gauge_preserves_mass(seed in 0u64..500, amp in 0.01f64..1.0) {
        let g = Grid::new(128, 30.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x0 = rng.gen_range(12.0..18.0);
        let k = rng.gen_range(-3.0..3.0);
        let f = Field::from_fn(g, |x| amp * (-((x - x0) / 2.0).powi(2)).exp() * Complex64::new(0.0, k * x).exp());
        let gf = gauge_apply_numeric(&f, Direction::Minus).unwrap();
        prop_assert!((gf.mass() - f.mass()).abs() < 1e-13 * f.mass().max(1e-300));
    }
}
