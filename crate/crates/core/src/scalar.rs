//! Number backends.
//!
//! Two coefficient types implement [`Coeff`]: [`Rational`] (arbitrary
//! precision, always reduced) and `f64`. Generic code in the rest of the
//! crate is written against the trait, so the backend is fixed by the type
//! and cannot change mid-computation. [`Scalar`] is the dynamically tagged
//! form used at the edges (CLI, bindings, file formats); arithmetic on it
//! refuses to mix backends.

use std::fmt::{self, Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

impl Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "rational" => Ok(Backend::Exact),
            "float" | "f64" => Ok(Backend::Float),
            other => Err(Error::invalid(format!("unknown backend {other:?}"))),
        }
    }
}

/// Coefficient field used by the polynomial and stability code.
pub trait Coeff: Signed + PartialOrd + Clone + Debug + Display + Send + Sync + 'static {
    const BACKEND: Backend;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Converts an exact rational into this backend (rounding for `f64`).
    fn from_rational(q: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn to_scalar(&self) -> Scalar;

    /// Extracts a value of this backend from a tagged scalar.
    fn from_scalar(s: &Scalar) -> Result<Self>;

    /// Textual form used in reports: `p/q` for rationals, shortest round-trip
    /// decimal for floats.
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Coeff for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }

    fn from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Exact(q) => Ok(q.clone()),
            Scalar::Float(_) => Err(Error::BackendMismatch),
        }
    }
}

impl Coeff for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(q: &Rational) -> Self {
        Coeff::to_f64(q)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }

    fn from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Float(x) => Ok(*x),
            Scalar::Exact(_) => Err(Error::BackendMismatch),
        }
    }
}

/// A number tagged with its backend.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn parse(literal: &str, backend: Backend) -> Result<Self> {
        match backend {
            Backend::Exact => parse_rational(literal).map(Scalar::Exact),
            Backend::Float => parse_float(literal).map(Scalar::Float),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => Coeff::to_f64(q),
            Scalar::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(q.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn try_add(&self, rhs: &Scalar) -> Result<Scalar> {
        self.zip(rhs, |a, b| a + b, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Scalar) -> Result<Scalar> {
        self.zip(rhs, |a, b| a - b, |a, b| a - b)
    }

    pub fn try_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        self.zip(rhs, |a, b| a * b, |a, b| a * b)
    }

    pub fn try_div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_zero() {
            return Err(Error::invalid("division by zero"));
        }
        self.zip(rhs, |a, b| a / b, |a, b| a / b)
    }

    fn zip(
        &self,
        rhs: &Scalar,
        exact: impl FnOnce(&Rational, &Rational) -> Rational,
        float: impl FnOnce(f64, f64) -> f64,
    ) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(exact(a, b))),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(float(*a, *b))),
            _ => Err(Error::BackendMismatch),
        }
    }
}

impl Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => Display::fmt(q, f),
            Scalar::Float(x) => Display::fmt(x, f),
        }
    }
}

/// Requires every entry to share one backend.
pub fn common_backend(values: &[Scalar]) -> Result<Option<Backend>> {
    let mut iter = values.iter().map(Scalar::backend);
    let Some(first) = iter.next() else {
        return Ok(None);
    };
    if iter.any(|b| b != first) {
        return Err(Error::BackendMismatch);
    }
    Ok(Some(first))
}

/// Parses `p/q`, an integer, or a decimal (optionally with exponent) into an
/// exact rational. Decimals convert exactly: `0.1` is `1/10`.
pub fn parse_rational(literal: &str) -> Result<Rational> {
    let s = literal.trim();
    let err = || Error::Parse {
        literal: literal.to_string(),
        backend: "rational",
    };
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_decimal(num.trim()).ok_or_else(err)?;
        let den = parse_decimal(den.trim()).ok_or_else(err)?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(num / den);
    }
    parse_decimal(s).ok_or_else(err)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(idx) => (&body[..idx], body[idx + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = Rational::from_integer(numer);
    let factor = Rational::from_integer(num_traits::pow(ten, scale.unsigned_abs() as usize));
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Some(if negative { -value } else { value })
}

/// Parses a float literal; `p/q` is accepted and evaluated in binary64.
pub fn parse_float(literal: &str) -> Result<f64> {
    let s = literal.trim();
    let err = || Error::Parse {
        literal: literal.to_string(),
        backend: "float",
    };
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| err())?;
            let den: f64 = den.trim().parse().map_err(|_| err())?;
            num / den
        }
        None => s.parse().map_err(|_| err())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(err())
    }
}

/// Shorthand for building exact rationals in code and tests.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}
