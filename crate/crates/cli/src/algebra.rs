use std::fmt::Write as _;

use dnls_core::golden::{check_gauged_golden, check_hierarchy_golden};
use dnls_core::hierarchy::predicted_bad_cubics;
use dnls_core::latex::equation_latex;
use dnls_core::{
    build_hierarchy_equation, check_y_properties, derive_gauged, extract_bad_cubics, is_gauged_form, Equation, GaussianRational,
    Parity,
};
use serde_json::{json, Value};

use crate::options::{Format, Options};
use crate::output::Artifacts;
use crate::{usage, Outcome};

const GOLDEN_HIERARCHY: std::ops::RangeInclusive<usize> = 0..=5;
const GOLDEN_GAUGED: std::ops::RangeInclusive<usize> = 1..=3;

pub fn default_alpha(n: usize) -> anyhow::Result<GaussianRational> {
    if n > 62 {
        return Err(usage(format!("n = {n} is out of range")));
    }
    Ok(GaussianRational::from_int(1i64 << n))
}

pub fn parse_alpha(opts: &Options, n: usize) -> anyhow::Result<GaussianRational> {
    match &opts.alpha {
        None => default_alpha(n),
        Some(s) => s.parse().map_err(|e| usage(format!("invalid --alpha {s:?}: {e}"))),
    }
}

pub fn equation_text(eq: &Equation) -> String {
    let sign = if eq.linear.sign > 0 { "+" } else { "-" };
    let lhs = match eq.parity {
        Parity::Schrodinger => "i q_t",
        Parity::Mkdv => "q_t",
    };
    format!(
        "{lhs} {sign} q[{}] = {}\ntime scale: {}\n",
        eq.linear.order,
        eq.nonlinearity,
        eq.time_scale
    )
}

fn render(eq: &Equation, format: Format) -> String {
    match format {
        Format::Latex => equation_latex(eq) + "\n",
        Format::Json => serde_json::to_string_pretty(&eq.to_json()).expect("equation serializes") + "\n",
        Format::Text => equation_text(eq),
    }
}

pub fn derive(opts: &Options) -> Outcome {
    let n = opts.n.ok_or_else(|| usage("derive needs --n"))?;
    let alpha = parse_alpha(opts, n)?;
    let format = opts.format.unwrap_or(Format::Text);
    let out = Artifacts::open("derive", opts, json!({ "n": n, "alpha": alpha, "format": format }))?;
    let eq = build_hierarchy_equation(n, &alpha)?;
    let body = render(&eq, format);
    print!("{body}");
    out.write(&format!("derive_n{n}.{}", format.extension()), body)?;
    Ok(true)
}

pub fn gauge(opts: &Options) -> Outcome {
    let j = opts.j.ok_or_else(|| usage("gauge needs --j"))?;
    if j == 0 {
        return Err(usage("--j must be at least 1"));
    }
    let format = opts.format.unwrap_or(Format::Text);
    let out = Artifacts::open("gauge", opts, json!({ "j": j, "n": 2 * j - 1, "format": format }))?;
    let n = 2 * j - 1;
    let eq = build_hierarchy_equation(n, &default_alpha(n)?)?;
    let d = derive_gauged(&eq)?;
    let body = match format {
        Format::Json => serde_json::to_string_pretty(&d.to_json())? + "\n",
        Format::Latex => equation_latex(&d.gauged) + "\n",
        Format::Text => {
            let mut s = equation_text(&d.gauged);
            writeln!(s, "phase time derivative: {}", d.phase_time_derivative)?;
            writeln!(s, "residual bad cubics: {}", d.residual_bad_cubics.len())?;
            s
        }
    };
    print!("{body}");
    out.write(&format!("gauge_j{j}.{}", format.extension()), body)?;
    Ok(d.residual_bad_cubics.is_empty())
}

struct Report {
    lines: Vec<String>,
    sections: serde_json::Map<String, Value>,
    passed: bool,
}

impl Report {
    fn record(&mut self, section: &str, label: String, ok: bool, detail: Value) {
        self.lines.push(format!("{} {label}", if ok { "PASS" } else { "FAIL" }));
        self.passed &= ok;
        let entry = self.sections.entry(section).or_insert_with(|| Value::Array(Vec::new()));
        entry.as_array_mut().expect("sections are arrays").push(json!({ "label": label, "passed": ok, "detail": detail }));
    }

    fn note(&mut self, label: String) {
        self.lines.push(format!("NOTE {label}"));
    }
}

fn check_y(rep: &mut Report, n: usize) -> anyhow::Result<()> {
    match check_y_properties(n) {
        Ok(y) => {
            let ok = y.items_passed.iter().all(|&b| b);
            rep.record("y_properties", format!("Y_{n} items 1-4 ({} terms, order {})", y.terms, y.order), ok, json!(y));
            let sf = &y.single_factor;
            rep.note(format!(
                "Y_{n} single-factor coefficient {} (exponent -n: {}, exponent -(n+1): {}); common sign {}",
                sf.actual.to_compact(), sf.matches_stated, sf.matches_shifted, y.coefficient_sign
            ));
        }
        Err(e) => rep.record("y_properties", format!("Y_{n}"), false, json!(e.to_string())),
    }
    Ok(())
}

fn check_bad_cubics(rep: &mut Report, n: usize, alpha: &GaussianRational) -> anyhow::Result<()> {
    let eq = build_hierarchy_equation(n, alpha)?;
    let found = extract_bad_cubics(&eq);
    let predicted = predicted_bad_cubics(n as u32, alpha);
    rep.record(
        "bad_cubics",
        format!("bad cubics n = {n} ({} classes)", predicted.len()),
        found == predicted,
        json!({ "extracted": found, "predicted": predicted }),
    );
    Ok(())
}

fn check_golden(rep: &mut Report, n: usize, alpha: &GaussianRational) {
    match check_hierarchy_golden(n, alpha) {
        Ok(r) => rep.record("reference_hierarchy", format!("reference equation n = {n}"), r.passed, json!(r)),
        Err(e) => rep.record("reference_hierarchy", format!("reference equation n = {n}"), false, json!(e.to_string())),
    }
}

fn check_gauged_reference(rep: &mut Report, j: usize) {
    match check_gauged_golden(j) {
        Ok(r) => {
            for f in &r.flagged {
                rep.note(format!(
                    "gauged j = {j}: flagged term {} listed {} derived {} ({})",
                    f.monomial,
                    f.listed.to_compact(),
                    f.derived.to_compact(),
                    if f.agrees { "agree" } else { "differ" }
                ));
            }
            rep.record("reference_gauged", format!("reference gauged equation j = {j}"), r.passed, json!(r));
        }
        Err(e) => rep.record("reference_gauged", format!("reference gauged equation j = {j}"), false, json!(e.to_string())),
    }
}

fn check_cancellation(rep: &mut Report, j: usize) -> anyhow::Result<()> {
    let n = 2 * j - 1;
    let eq = build_hierarchy_equation(n, &default_alpha(n)?)?;
    match derive_gauged(&eq) {
        Ok(d) => {
            let ok = is_gauged_form(&d.gauged);
            rep.record("cancellation", format!("gauged form j = {j}"), ok, json!({ "terms": d.gauged.nonlinearity.len() }));
        }
        Err(e) => rep.record("cancellation", format!("gauged form j = {j}"), false, json!(e.to_string())),
    }
    Ok(())
}

pub fn check(opts: &Options) -> Outcome {
    let format = opts.format.unwrap_or(Format::Text);
    if format == Format::Latex {
        return Err(usage("check writes text or json"));
    }
    let mut rep = Report {
        lines: Vec::new(),
        sections: serde_json::Map::new(),
        passed: true,
    };
    if opts.all {
        let n_max = opts.n_max.unwrap_or(9);
        if opts.alpha.is_some() {
            return Err(usage("check --all uses alpha = 2^n; drop --alpha"));
        }
        let out = Artifacts::open("check", opts, json!({ "all": true, "n_max": n_max, "format": format }))?;
        for n in 1..=n_max {
            check_y(&mut rep, n)?;
        }
        for n in 1..=n_max {
            check_bad_cubics(&mut rep, n, &default_alpha(n)?)?;
        }
        for n in GOLDEN_HIERARCHY {
            check_golden(&mut rep, n, &default_alpha(n)?);
        }
        for j in GOLDEN_GAUGED {
            check_gauged_reference(&mut rep, j);
        }
        for j in 2..=5 {
            check_cancellation(&mut rep, j)?;
        }
        finish(&out, rep, format)
    } else {
        let n = opts.n.ok_or_else(|| usage("check needs --n or --all"))?;
        let alpha = parse_alpha(opts, n)?;
        let out = Artifacts::open("check", opts, json!({ "all": false, "n": n, "alpha": alpha, "format": format }))?;
        if n >= 1 {
            check_y(&mut rep, n)?;
            check_bad_cubics(&mut rep, n, &alpha)?;
        }
        if GOLDEN_HIERARCHY.contains(&n) {
            check_golden(&mut rep, n, &alpha);
        }
        if n % 2 == 1 && alpha == default_alpha(n)? {
            let j = n.div_ceil(2);
            if GOLDEN_GAUGED.contains(&j) {
                check_gauged_reference(&mut rep, j);
            }
            check_cancellation(&mut rep, j)?;
        }
        finish(&out, rep, format)
    }
}

fn finish(out: &Artifacts, rep: Report, format: Format) -> Outcome {
    let summary = json!({ "passed": rep.passed, "sections": rep.sections });
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&summary)?),
        _ => {
            for l in &rep.lines {
                println!("{l}");
            }
            println!("{}", if rep.passed { "all checks passed" } else { "some checks failed" });
        }
    }
    out.write_json("check.json", &summary)?;
    out.write("check.txt", rep.lines.join("\n") + "\n")?;
    Ok(rep.passed)
}

pub fn export(opts: &Options) -> Outcome {
    let n_max = opts.n_max.unwrap_or(5);
    let format = opts.format.unwrap_or(Format::Latex);
    let out = Artifacts::open("export", opts, json!({ "n_max": n_max, "format": format }))?;
    let ext = format.extension();
    for n in 0..=n_max {
        let eq = build_hierarchy_equation(n, &default_alpha(n)?)?;
        let p = out.write(&format!("hierarchy_n{n}.{ext}"), render(&eq, format))?;
        println!("{}", p.display());
    }
    for j in 1..=n_max.div_ceil(2) {
        let n = 2 * j - 1;
        let d = derive_gauged(&build_hierarchy_equation(n, &default_alpha(n)?)?)?;
        let body = match format {
            Format::Json => serde_json::to_string_pretty(&d.to_json())? + "\n",
            _ => render(&d.gauged, format),
        };
        let p = out.write(&format!("gauged_j{j}.{ext}"), body)?;
        println!("{}", p.display());
    }
    Ok(true)
}
