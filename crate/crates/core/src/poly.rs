//! Monic and general polynomials over a [`Coeff`] backend.
//!
//! Coefficients are stored constant-term first. A [`MonicPolynomial`] of
//! degree `n` stores only `a_0..a_{n-1}`; the leading 1 is implicit.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{common_backend, Backend, Coeff, Rational, Scalar};

/// `x^n + a_{n-1} x^{n-1} + ... + a_1 x + a_0` with `n >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonicPolynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> MonicPolynomial<T> {
    /// Builds from the tail `a_0..a_{n-1}` (ascending).
    pub fn new(tail: Vec<T>) -> Result<Self> {
        if tail.is_empty() {
            return Err(Error::invalid("a monic polynomial needs degree >= 1"));
        }
        Ok(Self { coeffs: tail })
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Result<Self> {
        Self::new(vec![T::zero(); n])
    }

    /// Divides a descending-degree coefficient list through by its leading
    /// entry.
    pub fn from_descending(coeffs: &[T]) -> Result<Self> {
        normalize(coeffs)
    }

    /// Same as [`from_descending`](Self::from_descending) but for an
    /// ascending list whose last entry is the leading coefficient.
    pub fn from_ascending(coeffs: &[T]) -> Result<Self> {
        let descending: Vec<T> = coeffs.iter().rev().cloned().collect();
        normalize(&descending)
    }

    pub fn from_scalars_descending(values: &[Scalar]) -> Result<Self> {
        let coeffs = values.iter().map(T::from_scalar).collect::<Result<Vec<_>>>()?;
        normalize(&coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_0..a_{n-1}`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        if k < self.coeffs.len() {
            self.coeffs[k].clone()
        } else if k == self.coeffs.len() {
            T::one()
        } else {
            T::zero()
        }
    }

    /// `1 + sum |a_j|`.
    pub fn l1_norm(&self) -> T {
        T::one() + self.tail_l1()
    }

    /// `sum |a_j|`, the stage-0 tail sum.
    pub fn tail_l1(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, a| acc + a.abs())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::one(), |acc, a| acc * x.clone() + a.clone())
    }

    pub fn to_general(&self) -> GeneralPolynomial<T> {
        let mut c = self.coeffs.clone();
        c.push(T::one());
        GeneralPolynomial::new(c)
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> MonicPolynomial<U> {
        MonicPolynomial {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> MonicPolynomial<f64> {
        self.map(|a| a.to_f64())
    }

    /// Full coefficient list, highest degree first, leading 1 included.
    pub fn descending(&self) -> Vec<T> {
        std::iter::once(T::one())
            .chain(self.coeffs.iter().rev().cloned())
            .collect()
    }
}

impl<T: Coeff> fmt::Display for MonicPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_power_sum(f, self.degree(), &self.coeffs)
    }
}

/// Writes `x^lead + sum c_m x^m` in the style `x^5 + 1/2x^4 - 1/2x - 1/2`.
pub(crate) fn write_power_sum<T: Coeff>(f: &mut impl fmt::Write, lead: usize, tail: &[T]) -> fmt::Result {
    write_monomial(f, lead)?;
    for (m, c) in tail.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { '-' } else { '+' };
        let mag = c.abs();
        write!(f, " {sign} ")?;
        if m == 0 {
            write!(f, "{}", mag.render())?;
        } else {
            if !mag.is_one() {
                write!(f, "{}", mag.render())?;
            }
            write_monomial(f, m)?;
        }
    }
    Ok(())
}

fn write_monomial(f: &mut impl fmt::Write, k: usize) -> fmt::Result {
    match k {
        0 => f.write_str("1"),
        1 => f.write_str("x"),
        _ => write!(f, "x^{k}"),
    }
}

/// Normalizes a descending-degree coefficient list to monic form.
pub fn normalize<T: Coeff>(descending: &[T]) -> Result<MonicPolynomial<T>> {
    let Some((lead, rest)) = descending.split_first() else {
        return Err(Error::invalid("empty coefficient list"));
    };
    if lead.is_zero() {
        return Err(Error::invalid("leading coefficient is zero"));
    }
    if rest.is_empty() {
        return Err(Error::invalid("degree-0 polynomials are not supported"));
    }
    let tail = rest.iter().rev().map(|c| c.clone() / lead.clone()).collect();
    MonicPolynomial::new(tail)
}

/// Arbitrary polynomial, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralPolynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> GeneralPolynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![T::zero(); k + 1];
        c[k] = T::one();
        Self { coeffs: c }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, a| acc * x.clone() + a.clone())
    }

    /// Multiplies by `x` and, if the result reaches degree `n`, cancels the
    /// leading term with one multiple of `p`.
    pub fn shift_reduce(&self, p: &MonicPolynomial<T>) -> Self {
        let n = p.degree();
        let mut shifted = Vec::with_capacity(self.coeffs.len() + 1);
        shifted.push(T::zero());
        shifted.extend(self.coeffs.iter().cloned());
        if shifted.len() == n + 1 {
            let lead = shifted.pop().unwrap_or_else(T::zero);
            for (s, a) in shifted.iter_mut().zip(p.coeffs()) {
                *s = s.clone() - lead.clone() * a.clone();
            }
        }
        Self::new(shifted)
    }

    /// Interprets a monic polynomial with this as its non-leading part.
    pub fn into_monic(self) -> Result<MonicPolynomial<T>> {
        let Some(lead) = self.coeffs.last() else {
            return Err(Error::invalid("zero polynomial"));
        };
        if !lead.is_one() {
            return Err(Error::invalid("polynomial is not monic"));
        }
        let mut c = self.coeffs;
        c.pop();
        MonicPolynomial::new(c)
    }
}

impl<T: Coeff> fmt::Display for GeneralPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(deg) = self.degree() else {
            return f.write_str("0");
        };
        let lead = &self.coeffs[deg];
        if lead.is_one() {
            write_power_sum(f, deg, &self.coeffs[..deg])
        } else {
            let terms: Vec<String> = self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| format!("({})x^{k}", c.render()))
                .collect();
            f.write_str(&terms.join(" + "))
        }
    }
}

/// `x^k mod p`, by repeated multiply-by-x and one-step reduction.
pub fn mod_reduce<T: Coeff>(k: usize, p: &MonicPolynomial<T>) -> GeneralPolynomial<T> {
    let n = p.degree();
    if k < n {
        return GeneralPolynomial::monomial(k);
    }
    let mut r = GeneralPolynomial::monomial(n - 1);
    for _ in n - 1..k {
        r = r.shift_reduce(p);
    }
    r
}

/// A monic polynomial in whichever backend its literals were parsed with.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMonic {
    Exact(MonicPolynomial<Rational>),
    Float(MonicPolynomial<f64>),
}

impl AnyMonic {
    /// Parses descending-degree literals and normalizes.
    pub fn parse_descending<S: AsRef<str>>(literals: &[S], backend: Backend) -> Result<Self> {
        let values = literals
            .iter()
            .map(|s| Scalar::parse(s.as_ref(), backend))
            .collect::<Result<Vec<_>>>()?;
        Self::from_scalars_descending(&values)
    }

    pub fn from_scalars_descending(values: &[Scalar]) -> Result<Self> {
        match common_backend(values)? {
            None => Err(Error::invalid("empty coefficient list")),
            Some(Backend::Exact) => MonicPolynomial::from_scalars_descending(values).map(AnyMonic::Exact),
            Some(Backend::Float) => MonicPolynomial::from_scalars_descending(values).map(AnyMonic::Float),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            AnyMonic::Exact(_) => Backend::Exact,
            AnyMonic::Float(_) => Backend::Float,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            AnyMonic::Exact(p) => p.degree(),
            AnyMonic::Float(p) => p.degree(),
        }
    }

    pub fn to_f64(&self) -> MonicPolynomial<f64> {
        match self {
            AnyMonic::Exact(p) => p.to_f64(),
            AnyMonic::Float(p) => p.clone(),
        }
    }
}

impl fmt::Display for AnyMonic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyMonic::Exact(p) => p.fmt(f),
            AnyMonic::Float(p) => p.fmt(f),
        }
    }
}
