//! Exact Gaussian rationals `a + b i` with `a, b` arbitrary-precision rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// `(re_num/re_den) + (im_num/im_den) i`
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero Gaussian rational");
        let d = self.norm_sqr();
        Self::new(&self.re / &d, -(&self.im / &d))
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let k = BigRational::from_integer(BigInt::from(k));
        Self::new(&self.re * &k, &self.im * &k)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Human-facing form such as `3/2-5/4i`, `i`, `-2`; parsed back by [`FromStr`].
    pub fn to_compact(&self) -> String {
        let mut out = String::new();
        if !self.re.is_zero() || self.im.is_zero() {
            out.push_str(&self.re.to_string());
        }
        if !self.im.is_zero() {
            let mag = self.im.abs();
            if self.im.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            out.push('i');
        }
        out
    }
}

/// Canonical form `(re,im)` with reduced fractions.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.re, self.im)
    }
}

fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Coefficient(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Accepts `(re,im)` and the compact `a/b+c/d i` forms (`2`, `-i`, `1/2-3/4i`, `3i/2`).
impl FromStr for GaussianRational {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(ParseError::Coefficient(s.to_string()));
        }
        if let Some(inner) = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
            let (re, im) = inner
                .split_once(',')
                .ok_or_else(|| ParseError::Coefficient(s.to_string()))?;
            return Ok(Self::new(parse_rational(re)?, parse_rational(im)?));
        }
        // split into signed summands at +/- not at the start
        let mut parts = Vec::new();
        let mut start = 0;
        for (idx, c) in t.char_indices() {
            if idx > start && (c == '+' || c == '-') {
                parts.push(&t[start..idx]);
                start = idx;
            }
        }
        parts.push(&t[start..]);
        let mut acc = Self::zero();
        for part in parts {
            let (neg, body) = match part.as_bytes()[0] {
                b'-' => (true, &part[1..]),
                b'+' => (false, &part[1..]),
                _ => (false, part),
            };
            let term = if body.contains('i') {
                let rest = body.replacen('i', "", 1);
                let mag = if rest.is_empty() {
                    BigRational::one()
                } else if let Some(den) = rest.strip_prefix('/') {
                    // "3i/2"-style
                    parse_rational(&format!("1/{den}"))?
                } else if let Some((num, den)) = rest.split_once('/') {
                    if num.is_empty() {
                        parse_rational(&format!("1/{den}"))?
                    } else {
                        parse_rational(&format!("{num}/{den}"))?
                    }
                } else {
                    parse_rational(&rest)?
                };
                Self::new(BigRational::zero(), mag)
            } else {
                Self::new(parse_rational(body)?, BigRational::zero())
            };
            acc += if neg { -term } else { term };
        }
        Ok(acc)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonCoeff {
    re: String,
    im: String,
}

/// JSON form `{"re": "a/b", "im": "c/d"}`.
impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        JsonCoeff {
            re: self.re.to_string(),
            im: self.im.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = JsonCoeff::deserialize(d)?;
        Ok(Self::new(
            parse_rational(&raw.re).map_err(serde::de::Error::custom)?,
            parse_rational(&raw.im).map_err(serde::de::Error::custom)?,
        ))
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::new(&self.re * &o.re, BigRational::zero());
        }
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        self * &o.inv()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: &GaussianRational) -> GaussianRational {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl AddAssign for GaussianRational {
    fn add_assign(&mut self, o: GaussianRational) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, o: &GaussianRational) {
        *self = &*self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn inverse_of_two_i() {
        let c = GaussianRational::from_parts(0, 1, 2, 1).inv();
        assert_eq!(c, g("-1/2i"));
        assert_eq!(&c + &c, g("-i"));
    }

    #[test]
    fn powers() {
        let two_i = g("2i");
        assert_eq!(two_i.pow(2), g("-4"));
        assert_eq!(two_i.pow(-3), g("1/8i"));
        assert_eq!(two_i.pow(0), GaussianRational::one());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(g("8"), GaussianRational::from_int(8));
        assert_eq!(g("-i"), -GaussianRational::i());
        assert_eq!(g("1/2-3/4i"), GaussianRational::from_parts(1, 2, -3, 4));
        assert_eq!(g("3i/2"), GaussianRational::from_parts(0, 1, 3, 2));
        assert_eq!(g("(5/2,-1/3)"), GaussianRational::from_parts(5, 2, -1, 3));
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("".parse::<GaussianRational>().is_err());
        assert!("x".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "i", "-7/3", "1/2+5/6i", "-1/4-i"] {
            let v = g(s);
            assert_eq!(g(&v.to_string()), v);
            assert_eq!(g(&v.to_compact()), v);
        }
        assert_eq!(g("2/4").to_string(), "(1/2,0)");
    }
}
