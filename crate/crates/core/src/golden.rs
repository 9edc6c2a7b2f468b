//! Reference hierarchy and gauged equations (hand transcriptions in subscript notation)
//! and the comparisons against the derived equations.

use serde::Serialize;

use crate::error::{AlgebraError, ParseError};
use crate::gauge::derive_gauged;
use crate::hierarchy::build_hierarchy_equation;
use crate::latex::parse_latex_poly;
use crate::poly::{DiffPoly, Monomial};
use crate::rational::GaussianRational;

const HIERARCHY: [&str; 6] = [
    include_str!("../golden/hierarchy_n0.tex"),
    include_str!("../golden/hierarchy_n1.tex"),
    include_str!("../golden/hierarchy_n2.tex"),
    include_str!("../golden/hierarchy_n3.tex"),
    include_str!("../golden/hierarchy_n4.tex"),
    include_str!("../golden/hierarchy_n5.tex"),
];

const GAUGED: [&str; 3] = [
    include_str!("../golden/gauged_j1.tex"),
    include_str!("../golden/gauged_j2.tex"),
    include_str!("../golden/gauged_j3.tex"),
];

/// `key = value` records; indented lines continue the previous value.
fn records(src: &str) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    for line in src.lines() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        if line.starts_with(char::is_whitespace) {
            if let Some(last) = out.last_mut() {
                last.1.push(' ');
                last.1.push_str(line.trim());
            }
        } else if let Some((k, v)) = line.split_once('=') {
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
    out
}

fn field<'a>(recs: &'a [(String, String)], key: &str) -> Result<&'a str, ParseError> {
    recs.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| ParseError::Poly(format!("reference record lacks `{key}`")))
}

#[derive(Clone, Debug)]
pub struct HierarchyGolden {
    pub n: usize,
    /// `κ/α` in `q_t = κ (∂^{n+1} q + ∂_x P)`
    pub prefactor: GaussianRational,
    pub flux: DiffPoly,
    pub expanded: DiffPoly,
}

pub fn hierarchy_golden(n: usize) -> Option<Result<HierarchyGolden, ParseError>> {
    let src = HIERARCHY.get(n)?;
    let recs = records(src);
    Some((|| {
        Ok(HierarchyGolden {
            n,
            prefactor: field(&recs, "prefactor")?.parse()?,
            flux: parse_latex_poly(field(&recs, "flux")?)?,
            expanded: parse_latex_poly(field(&recs, "expanded")?)?,
        })
    })())
}

#[derive(Clone, Debug)]
pub struct GaugedGolden {
    pub j: usize,
    pub rhs: DiffPoly,
    pub flagged: DiffPoly,
}

pub fn gauged_golden(j: usize) -> Option<Result<GaugedGolden, ParseError>> {
    let src = GAUGED.get(j.checked_sub(1)?)?;
    let recs = records(src);
    Some((|| {
        let flagged = match field(&recs, "flagged") {
            Ok(v) => parse_latex_poly(v)?,
            Err(_) => DiffPoly::zero(),
        };
        Ok(GaugedGolden {
            j,
            rhs: parse_latex_poly(field(&recs, "rhs")?)?,
            flagged,
        })
    })())
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyGoldenReport {
    pub n: usize,
    pub alpha: GaussianRational,
    /// Reference flux form and expanded form agree with each other.
    pub reference_consistent: bool,
    pub flux_matches: bool,
    pub expanded_matches: bool,
    pub passed: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum GoldenError {
    #[error("no reference data for index {0}")]
    Missing(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub fn check_hierarchy_golden(n: usize, alpha: &GaussianRational) -> Result<HierarchyGoldenReport, GoldenError> {
    let gold = hierarchy_golden(n).ok_or(GoldenError::Missing(n))??;
    let eq = build_hierarchy_equation(n, alpha)?;
    let lin = DiffPoly::q(n as u32 + 1);
    let reference_consistent = gold.expanded == &lin + &gold.flux.dx();
    let kappa = &gold.prefactor * alpha;
    let expanded_matches = eq.time_derivative() == gold.expanded.scale(&kappa);
    let flux_matches = eq.flux.as_ref() == Some(&gold.flux);
    Ok(HierarchyGoldenReport {
        n,
        alpha: alpha.clone(),
        reference_consistent,
        flux_matches,
        expanded_matches,
        passed: reference_consistent && flux_matches && expanded_matches,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TermDifference {
    pub monomial: String,
    pub derived: GaussianRational,
    pub listed: GaussianRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlaggedTerm {
    pub monomial: String,
    pub listed: GaussianRational,
    pub derived: GaussianRational,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaugedGoldenReport {
    pub j: usize,
    pub exact: bool,
    /// Differences outside the flagged terms.
    pub unexpected: Vec<TermDifference>,
    pub flagged: Vec<FlaggedTerm>,
    pub passed: bool,
}

pub fn check_gauged_golden(j: usize) -> Result<GaugedGoldenReport, GoldenError> {
    let gold = gauged_golden(j).ok_or(GoldenError::Missing(j))??;
    let n = 2 * j - 1;
    let eq = build_hierarchy_equation(n, &GaussianRational::from_int(1 << n))?;
    let derived = derive_gauged(&eq)?.gauged.nonlinearity;
    let diff = &derived - &gold.rhs;
    let is_flagged = |m: &Monomial| !gold.flagged.coeff(m).is_zero();
    let unexpected = diff
        .terms()
        .filter(|(m, _)| !is_flagged(m))
        .map(|(m, _)| TermDifference {
            monomial: m.to_string(),
            derived: derived.coeff(m),
            listed: gold.rhs.coeff(m),
        })
        .collect::<Vec<_>>();
    let flagged = gold
        .flagged
        .terms()
        .map(|(m, _)| FlaggedTerm {
            monomial: m.to_string(),
            listed: gold.rhs.coeff(m),
            derived: derived.coeff(m),
            agrees: gold.rhs.coeff(m) == derived.coeff(m),
        })
        .collect();
    Ok(GaugedGoldenReport {
        j,
        exact: diff.is_zero(),
        passed: unexpected.is_empty(),
        unexpected,
        flagged,
    })
}
