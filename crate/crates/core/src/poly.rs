//! Differential polynomials in the potentials `q`, `r` and their x-derivatives.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;
use crate::rational::GaussianRational;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    Q,
    R,
}

impl Var {
    pub fn swap(self) -> Var {
        match self {
            Var::Q => Var::R,
            Var::R => Var::Q,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "q",
            Var::R => "r",
        }
    }
}

/// `∂_x^order var`. Ordered by variable first, then derivative order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Factor {
    pub var: Var,
    pub order: u32,
}

impl Factor {
    pub fn new(var: Var, order: u32) -> Self {
        Self { var, order }
    }

    pub fn q(order: u32) -> Self {
        Self::new(Var::Q, order)
    }

    pub fn r(order: u32) -> Self {
        Self::new(Var::R, order)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.var.name(), self.order)
    }
}

impl FromStr for Factor {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::Factor(s.to_string());
        let var = match s.get(..1) {
            Some("q") => Var::Q,
            Some("r") => Var::R,
            _ => return Err(bad()),
        };
        let order = s[1..]
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        Ok(Factor::new(var, order))
    }
}

/// Sorted multiset of factors; the empty monomial is the constant 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<Factor>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn new(mut factors: Vec<Factor>) -> Self {
        factors.sort_unstable();
        Self(factors)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn derivative_count(&self) -> u32 {
        self.0.iter().map(|f| f.order).sum()
    }

    /// `2·(derivative count) + (factor count)`; additive under products, raised by 2 under `∂_x`.
    pub fn order(&self) -> u32 {
        2 * self.derivative_count() + self.0.len() as u32
    }

    pub fn count(&self, var: Var) -> usize {
        self.0.iter().filter(|f| f.var == var).count()
    }

    pub fn multiplicity(&self, factor: Factor) -> usize {
        self.0.iter().filter(|&&f| f == factor).count()
    }

    /// One more `q`-type factor than `r`-type factors.
    pub fn is_phase_balanced(&self) -> bool {
        self.count(Var::Q) == self.count(Var::R) + 1
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => {
                    if x <= y {
                        out.push(*a.next().unwrap());
                    } else {
                        out.push(*b.next().unwrap());
                    }
                }
                (Some(_), None) => out.push(*a.next().unwrap()),
                (None, Some(_)) => out.push(*b.next().unwrap()),
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// Removes one copy of `factor`, if present.
    pub fn without(&self, factor: Factor) -> Option<Monomial> {
        let idx = self.0.iter().position(|&f| f == factor)?;
        let mut v = self.0.clone();
        v.remove(idx);
        Some(Monomial(v))
    }

    /// Replaces one copy of `factor` by `replacement`.
    pub fn replace(&self, factor: Factor, replacement: Factor) -> Option<Monomial> {
        let idx = self.0.iter().position(|&f| f == factor)?;
        let mut v = self.0.clone();
        v[idx] = replacement;
        Some(Monomial::new(v))
    }

    pub fn conj(&self) -> Monomial {
        Monomial::new(
            self.0
                .iter()
                .map(|f| Factor::new(f.var.swap(), f.order))
                .collect(),
        )
    }

    /// Distinct factors with their multiplicities, in canonical order.
    pub fn grouped(&self) -> Vec<(Factor, usize)> {
        let mut out: Vec<(Factor, usize)> = Vec::new();
        for &f in &self.0 {
            match out.last_mut() {
                Some((g, k)) if *g == f => *k += 1,
                _ => out.push((f, 1)),
            }
        }
        out
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Fewer factors first, then lexicographic on the sorted factor list.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join("·"))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: GaussianRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(var: Var, order: u32) -> Self {
        Self::monomial(
            Monomial::new(vec![Factor::new(var, order)]),
            GaussianRational::one(),
        )
    }

    pub fn q(order: u32) -> Self {
        Self::var(Var::Q, order)
    }

    pub fn r(order: u32) -> Self {
        Self::var(Var::R, order)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussianRational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &GaussianRational) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Total x-derivative by the Leibniz rule.
    pub fn dx(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (f, k) in m.grouped() {
                let raised = m.replace(f, Factor::new(f.var, f.order + 1)).unwrap();
                out.add_term(raised, c.scale_int(k as i64));
            }
        }
        out
    }

    pub fn dx_n(&self, k: u32) -> DiffPoly {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.dx();
        }
        p
    }

    /// Swaps `q ↔ r` and conjugates every coefficient.
    pub fn conj(&self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect(),
        }
    }

    /// Formal partial derivative with respect to one factor symbol.
    pub fn partial(&self, factor: Factor) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let k = m.multiplicity(factor);
            if k > 0 {
                out.add_term(m.without(factor).unwrap(), c.scale_int(k as i64));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        let mut acc = DiffPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Highest derivative order of `var` present, if any.
    pub fn max_order(&self, var: Var) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter())
            .filter(|f| f.var == var)
            .map(|f| f.order)
            .max()
    }

    /// Common monomial order if all terms share one.
    pub fn homogeneous_order(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::order);
        let first = it.next()?;
        it.all(|o| o == first).then_some(first)
    }

    /// Keeps the terms accepted by `pred`.
    pub fn filter<F: Fn(&Monomial) -> bool>(&self, pred: F) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Replaces every factor by a polynomial (ring homomorphism fixing coefficients).
    pub fn substitute<F: FnMut(Factor) -> DiffPoly>(&self, mut image: F) -> DiffPoly {
        let mut cache: BTreeMap<Factor, DiffPoly> = BTreeMap::new();
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut t = DiffPoly::constant(c.clone());
            for &f in m.factors() {
                let img = cache.entry(f).or_insert_with(|| image(f));
                t = &t * &*img;
            }
            out = &out + &t;
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("DiffPoly serializes")
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.degree() == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}·{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for DiffPoly {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(DiffPoly::zero());
        }
        let mut p = DiffPoly::zero();
        for term in s.split(" + ") {
            let mut pieces = term.split('·');
            let coeff: GaussianRational = pieces
                .next()
                .filter(|c| c.starts_with('('))
                .ok_or_else(|| ParseError::Poly(format!("term `{term}` lacks a coefficient")))?
                .parse()?;
            let factors = pieces.map(str::parse).collect::<Result<Vec<Factor>, _>>()?;
            p.add_term(Monomial::new(factors), coeff);
        }
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    coeff: GaussianRational,
    factors: Vec<Factor>,
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    terms: Vec<JsonTerm>,
}

impl Serialize for DiffPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        JsonPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| JsonTerm {
                    coeff: c.clone(),
                    factors: m.factors().to_vec(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = JsonPoly::deserialize(d)?;
        let mut p = DiffPoly::zero();
        for t in raw.terms {
            p.add_term(Monomial::new(t.factors), t.coeff);
        }
        Ok(p)
    }
}

impl<'a> Add<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn add(self, o: &DiffPoly) -> DiffPoly {
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn sub(self, o: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn mul(self, o: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, o: DiffPoly) -> DiffPoly {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, o: &DiffPoly) -> DiffPoly {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&-GaussianRational::one())
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}
