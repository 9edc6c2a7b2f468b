//! LaTeX rendering in subscript notation (`q_x`, `q_{xx}`, `r^2`) and a parser for it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;
use crate::hierarchy::{Equation, Parity};
use crate::poly::{DiffPoly, Factor, Monomial, Var};
use crate::rational::GaussianRational;

fn factor_symbol(f: Factor) -> String {
    let v = f.var.name();
    match f.order {
        0 => v.to_string(),
        1 => format!("{v}_x"),
        k => format!("{v}_{{{}}}", "x".repeat(k as usize)),
    }
}

pub fn monomial_latex(m: &Monomial) -> String {
    let mut out = String::new();
    for (f, k) in m.grouped() {
        out.push_str(&factor_symbol(f));
        if k > 1 {
            out.push_str(&format!("^{k}"));
        }
    }
    out
}

fn rational_body(mag: &BigRational, imaginary: bool) -> String {
    let i = if imaginary { "i" } else { "" };
    if mag.is_integer() {
        if mag.is_one() && imaginary {
            "i".to_string()
        } else {
            format!("{}{i}", mag.numer())
        }
    } else {
        format!("\\frac{{{}{i}}}{{{}}}", mag.numer(), mag.denom())
    }
}

/// Signed coefficient prefix for a term; unit coefficients print as bare signs.
fn coeff_latex(c: &GaussianRational, has_factors: bool) -> String {
    if c.im.is_zero() || c.re.is_zero() {
        let (part, imaginary) = if c.im.is_zero() { (&c.re, false) } else { (&c.im, true) };
        let sign = if part.is_negative() { "-" } else { "+" };
        let mag = part.abs();
        let body = if mag.is_one() && !imaginary && has_factors {
            String::new()
        } else {
            rational_body(&mag, imaginary)
        };
        format!("{sign}{body}")
    } else {
        format!(
            "+\\left({}{}\\right)",
            rational_body(&c.re, false),
            coeff_latex(&GaussianRational::new(BigRational::zero(), c.im.clone()), false)
        )
    }
}

pub fn poly_latex(p: &DiffPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (m, c) in p.terms() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&coeff_latex(c, m.degree() > 0));
        out.push_str(&monomial_latex(m));
    }
    out.strip_prefix('+').map(str::to_string).unwrap_or(out)
}

pub fn coefficient_latex(c: &GaussianRational) -> String {
    let s = coeff_latex(c, false);
    s.strip_prefix('+').map(str::to_string).unwrap_or(s)
}

fn d_symbol(order: u32) -> String {
    factor_symbol(Factor::q(order))
}

/// Canonical-form equation; the raw form `q_t = κ(∂^{n+1}q + ∂_x P)` is added for
/// ungauged hierarchy members.
pub fn equation_latex(eq: &Equation) -> String {
    let lin = d_symbol(eq.linear.order);
    let sign = if eq.linear.sign > 0 { "+" } else { "-" };
    let canonical = match eq.parity {
        Parity::Schrodinger => format!("iq_t {sign} {lin} = {}", poly_latex(&eq.nonlinearity)),
        Parity::Mkdv => format!("q_t {sign} {lin} = {}", poly_latex(&eq.nonlinearity)),
    };
    let Some(flux) = eq.flux.as_ref().filter(|_| !eq.gauged) else {
        return canonical;
    };
    // q_t = κ (∂^{n+1} q + ∂_x P) with κ the coefficient of the linear term of q_t
    let qt = eq.time_derivative();
    let kappa = qt.coeff(&Monomial::new(vec![Factor::q(eq.linear.order)]));
    let expanded = qt.filter(|m| m.degree() > 1).scale(&kappa.inv());
    let k = coefficient_latex(&kappa);
    format!(
        "q_t = {k}\\left({lin} + \\partial_x\\left({}\\right)\\right) = {k}\\left({lin} {}\\right)\n{canonical}",
        poly_latex(flux),
        signed(&poly_latex(&expanded))
    )
}

fn signed(s: &str) -> String {
    if s.starts_with('-') {
        s.to_string()
    } else {
        format!("+{s}")
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap())
    }

    fn err(&self, what: &str) -> ParseError {
        ParseError::Poly(format!(
            "{what} at byte {} of `{}`",
            self.pos,
            String::from_utf8_lossy(self.s)
        ))
    }

    /// `12`, `i`, `3i`, `\frac{5}{2}`, `\frac{35i}{2}`; absent means 1.
    fn coefficient(&mut self) -> Result<GaussianRational, ParseError> {
        if self.eat("\\frac{") {
            let num = self.digits().unwrap_or_else(BigInt::one);
            let imaginary = self.eat("i");
            if !self.eat("}{") {
                return Err(self.err("expected `}{`"));
            }
            let den = self.digits().ok_or_else(|| self.err("expected denominator"))?;
            if !self.eat("}") {
                return Err(self.err("expected `}`"));
            }
            let v = BigRational::new(num, den);
            return Ok(if imaginary {
                GaussianRational::new(BigRational::zero(), v)
            } else {
                v.into()
            });
        }
        let v = self.digits().map(BigRational::from_integer).unwrap_or_else(BigRational::one);
        Ok(if self.eat("i") {
            GaussianRational::new(BigRational::zero(), v)
        } else {
            v.into()
        })
    }

    fn factor(&mut self) -> Result<Option<(Factor, u32)>, ParseError> {
        let var = match self.peek() {
            Some(b'q') => Var::Q,
            Some(b'r') => Var::R,
            _ => return Ok(None),
        };
        self.pos += 1;
        let mut order = 0;
        if self.eat("_{") {
            while self.eat("x") {
                order += 1;
            }
            if !self.eat("}") {
                return Err(self.err("expected `}` after subscript"));
            }
        } else if self.eat("_x") {
            order = 1;
        }
        let mut power = 1;
        if self.eat("^{") {
            power = self.digits().ok_or_else(|| self.err("expected exponent"))?.try_into().unwrap();
            if !self.eat("}") {
                return Err(self.err("expected `}` after exponent"));
            }
        } else if self.eat("^") {
            let c = self.peek().filter(u8::is_ascii_digit).ok_or_else(|| self.err("expected exponent"))?;
            self.pos += 1;
            power = (c - b'0') as u32;
        }
        Ok(Some((Factor::new(var, order), power)))
    }
}

/// Parses a sum of signed terms such as `-iq^2r_{xx} -4iqq_{xx}r +\frac{5i}{2}q^4r^3`.
pub fn parse_latex_poly(src: &str) -> Result<DiffPoly, ParseError> {
    let cleaned: String = src
        .replace("\\left", "")
        .replace("\\right", "")
        .replace("\\\\", "")
        .replace('&', "")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    if cleaned == "0" {
        return Ok(DiffPoly::zero());
    }
    let mut cur = Cursor {
        s: cleaned.as_bytes(),
        pos: 0,
    };
    let mut out = DiffPoly::zero();
    while cur.peek().is_some() {
        let neg = if cur.eat("-") {
            true
        } else {
            cur.eat("+");
            false
        };
        let mut coeff = cur.coefficient()?;
        if neg {
            coeff = -coeff;
        }
        let mut factors = Vec::new();
        while let Some((f, k)) = cur.factor()? {
            factors.extend(std::iter::repeat_n(f, k as usize));
        }
        if factors.is_empty() && cur.peek().is_some_and(|c| c != b'+' && c != b'-') {
            return Err(cur.err("unexpected character"));
        }
        if let Some(c) = cur.peek().filter(|&c| c != b'+' && c != b'-') {
            return Err(cur.err(&format!("unexpected `{}`", c as char)));
        }
        out.add_term(Monomial::new(factors), coeff);
    }
    Ok(out)
}
