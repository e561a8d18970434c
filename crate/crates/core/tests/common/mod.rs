#![allow(dead_code)]

use l1stab::{MonicPolynomial, Rational};
use num_bigint::BigInt;
use rand::Rng;

pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational in `[-bound, bound]` with denominator at most `max_den`.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> Rational {
    let den = rng.gen_range(1..=max_den);
    q(rng.gen_range(-bound * den..=bound * den), den)
}

pub fn random_poly<R: Rng>(rng: &mut R, degree: usize, bound: i64, max_den: i64) -> MonicPolynomial<Rational> {
    MonicPolynomial::new((0..degree).map(|_| random_rational(rng, bound, max_den)).collect()).unwrap()
}

/// Product of linear and quadratic factors with roots drawn inside the
/// disk of radius `radius` (real roots and conjugate pairs).
pub fn random_poly_from_roots<R: Rng>(rng: &mut R, degree: usize, radius: f64) -> MonicPolynomial<Rational> {
    let mut coeffs = vec![q(1, 1)];
    let mut remaining = degree;
    let mul = |c: &[Rational], f: &[Rational]| {
        let mut out = vec![q(0, 1); c.len() + f.len() - 1];
        for (i, a) in c.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    };
    let den = 64i64;
    let scaled = (radius * den as f64) as i64;
    while remaining > 0 {
        if remaining >= 2 && rng.gen_bool(0.5) {
            // x^2 - 2 re x + (re^2 + im^2) with re^2 + im^2 < radius^2
            let (re, im) = loop {
                let re = rng.gen_range(-scaled..=scaled);
                let im = rng.gen_range(1..=scaled);
                if re * re + im * im < scaled * scaled {
                    break (re, im);
                }
            };
            let factor = [q(re * re + im * im, den * den), q(-2 * re, den), q(1, 1)];
            coeffs = mul(&coeffs, &factor);
            remaining -= 2;
        } else {
            let r = rng.gen_range(-scaled + 1..scaled);
            coeffs = mul(&coeffs, &[q(-r, den), q(1, 1)]);
            remaining -= 1;
        }
    }
    coeffs.pop();
    MonicPolynomial::new(coeffs).unwrap()
}

/// Independent stage computation: repeatedly substitutes the recurrence
/// `y_{k+1} = sum_l c_l y_{k+1-l}` into the term with the smallest lag.
/// Returns `beta` of the stage-`stages` characteristic polynomial.
pub fn lag_substitution_beta(p: &MonicPolynomial<Rational>, stages: usize) -> Vec<Rational> {
    let n = p.degree();
    let base: Vec<Rational> = (0..=n)
        .map(|l| if l == 0 { q(0, 1) } else { -p.coeff(n - l) })
        .collect();
    let mut c = vec![q(0, 1); n + stages + 1];
    c[..=n].clone_from_slice(&base);
    for s in 1..=stages {
        let lead = std::mem::replace(&mut c[s], q(0, 1));
        for l in 1..=n {
            c[s + l] += &lead * &base[l];
        }
    }
    let total = n + stages;
    (0..n).map(|m| -c[total - m].clone()).collect()
}

/// Remainder of `x^k` divided by `p`, by schoolbook long division.
pub fn long_division_remainder(k: usize, p: &MonicPolynomial<Rational>) -> Vec<Rational> {
    let n = p.degree();
    let mut r = vec![q(0, 1); k.max(n) + 1];
    r[k] = q(1, 1);
    for top in (n..=k).rev() {
        let lead = r[top].clone();
        if lead == q(0, 1) {
            continue;
        }
        for j in 0..=n {
            r[top - n + j] -= &lead * p.coeff(j);
        }
    }
    r.truncate(n);
    r
}
