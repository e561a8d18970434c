//! Worked applications: the delayed Cournot oligopoly and the Ricker
//! competition model. Both go through [`run_algorithm`] unchanged.

use serde::{Deserialize, Serialize};

use crate::engine::{run_algorithm, AlgoConfig, Certificate, Verdict};
use crate::error::{Error, Result};
use crate::poly::MonicPolynomial;
use crate::scalar::{Coeff, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct CournotParams<T> {
    pub lambda: T,
    pub k: usize,
    pub n_competitors: usize,
}

impl<T: Coeff> CournotParams<T> {
    pub fn new(lambda: T, k: usize, n_competitors: usize) -> Result<Self> {
        let params = CournotParams {
            lambda,
            k,
            n_competitors,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > T::zero() && self.lambda < T::one()) {
            return Err(Error::InvalidParams("lambda must lie in (0, 1)".into()));
        }
        if self.k < 1 {
            return Err(Error::InvalidParams("delay k must be at least 1".into()));
        }
        if !matches!(self.n_competitors, 2 | 3) {
            return Err(Error::InvalidParams(format!(
                "competitor count must be 2 or 3, got {}",
                self.n_competitors
            )));
        }
        Ok(())
    }
}

/// `x^{k+1} - (1 - lambda) x^k + c`.
fn cournot_poly<T: Coeff>(lambda: &T, k: usize, constant: T) -> MonicPolynomial<T> {
    let mut tail = vec![T::zero(); k + 1];
    tail[0] = constant;
    tail[k] = -(T::one() - lambda.clone());
    MonicPolynomial::new(tail).expect("degree k + 1 >= 2")
}

/// `[p1, p2]` for two competitors, `[p1, p3]` for three, where
/// `p1 = x^{k+1} - (1-l) x^k - l/2`, `p2 = ... + l/2` and `p3 = ... + l`.
pub fn cournot_polys<T: Coeff>(p: &CournotParams<T>) -> Result<Vec<MonicPolynomial<T>>> {
    p.validate()?;
    let half = p.lambda.clone() / T::from_i64(2);
    let p1 = cournot_poly(&p.lambda, p.k, -half.clone());
    let second = match p.n_competitors {
        2 => cournot_poly(&p.lambda, p.k, half),
        _ => cournot_poly(&p.lambda, p.k, p.lambda.clone()),
    };
    Ok(vec![p1, second])
}

/// `|(1-l)^{k+1} - l| + l * sum_{j=1..k} (1-l)^j`.
pub fn cournot_closed_form(lambda: &Rational, k: usize) -> Rational {
    let one = Rational::from_integer(1.into());
    let mu = &one - lambda;
    let mut power = mu.clone();
    let mut geometric = Rational::from_integer(0.into());
    for _ in 0..k {
        geometric += &power;
        power *= &mu;
    }
    num_traits::Signed::abs(&(power - lambda)) + lambda * geometric
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyReport {
    pub name: String,
    pub polynomial: String,
    pub verdict: Verdict,
    pub stage: Option<usize>,
    pub tail_sums: Vec<String>,
}

impl PolyReport {
    fn new(name: &str, p: &MonicPolynomial<Rational>, cert: &Certificate<Rational>) -> Self {
        PolyReport {
            name: name.to_string(),
            polynomial: p.to_string(),
            verdict: cert.verdict,
            stage: cert.deciding_stage,
            tail_sums: cert.tail_sums().map(|s| s.to_string()).collect(),
        }
    }
}

/// Checks on `p3` (three competitors only).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct P3Check {
    pub stage1_sum: String,
    pub stage1_sum_is_one: bool,
    pub stage_k_sum: String,
    pub closed_form: String,
    pub closed_form_matches: bool,
    pub closed_form_below_one: bool,
    pub certified_within_k: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CournotReport {
    pub lambda: String,
    pub k: usize,
    pub n_competitors: usize,
    pub polynomials: Vec<PolyReport>,
    /// Both polynomials certified at stage 0 (two competitors).
    pub stage0_for_n2: Option<bool>,
    pub p3: Option<P3Check>,
}

impl CournotReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn all_hold(&self) -> bool {
        let n2 = self.stage0_for_n2.unwrap_or(true);
        let n3 = self.p3.as_ref().is_none_or(|c| {
            c.stage1_sum_is_one && c.closed_form_matches && c.closed_form_below_one && c.certified_within_k
        });
        n2 && n3
    }
}

pub fn cournot_verify(p: &CournotParams<Rational>, cfg: &AlgoConfig) -> Result<CournotReport> {
    let polys = cournot_polys(p)?;
    let names = if p.n_competitors == 2 {
        ["p1", "p2"]
    } else {
        ["p1", "p3"]
    };
    let certs: Vec<_> = polys.iter().map(|q| run_algorithm(q, cfg)).collect();
    let reports = names
        .iter()
        .zip(polys.iter().zip(&certs))
        .map(|(name, (q, c))| PolyReport::new(name, q, c))
        .collect();

    let stage0_for_n2 = (p.n_competitors == 2).then(|| {
        certs
            .iter()
            .all(|c| c.verdict == Verdict::Certified && c.deciding_stage == Some(0))
    });

    let p3 = (p.n_competitors == 3).then(|| {
        let p3 = &polys[1];
        // Full trace up to stage k, independent of where certification stops.
        let full = run_algorithm(
            p3,
            &AlgoConfig {
                max_stages: p.k,
                ..*cfg
            },
        );
        let mut trace = full.trace.clone();
        while trace.len() <= p.k {
            let next = crate::engine::iterate_stage(trace.last().expect("non-empty"), p3);
            trace.push(next);
        }
        let one = Rational::from_integer(1.into());
        let stage1 = trace[1].tail_sum.clone();
        let stage_k = trace[p.k].tail_sum.clone();
        let closed = cournot_closed_form(&p.lambda, p.k);
        P3Check {
            stage1_sum: stage1.to_string(),
            stage1_sum_is_one: stage1 == one,
            stage_k_sum: stage_k.to_string(),
            closed_form: closed.to_string(),
            closed_form_matches: stage_k == closed,
            closed_form_below_one: closed < one,
            certified_within_k: certs[1].verdict == Verdict::Certified
                && certs[1].deciding_stage.is_some_and(|s| s <= p.k),
        }
    });

    Ok(CournotReport {
        lambda: p.lambda.to_string(),
        k: p.k,
        n_competitors: p.n_competitors,
        polynomials: reports,
        stage0_for_n2,
        p3,
    })
}

/// Coefficients `(r + 2 - 3t, 1 + (a - 3)t + b t^2)` of the quadratic factor
/// `x^2 - A x + B`, with `t = r / a`. `None` when `a = 0`.
pub fn ricker_coefficients<T: Coeff>(r: &T, a: &T, b: &T) -> Option<(T, T)> {
    if a.is_zero() {
        return None;
    }
    let t = r.clone() / a.clone();
    let three = T::from_i64(3);
    let lin = r.clone() + T::from_i64(2) - three.clone() * t.clone();
    let constant = T::one() + (a.clone() - three) * t.clone() + b.clone() * t.clone() * t;
    Some((lin, constant))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RickerParams<T> {
    pub r: T,
    pub a: T,
    pub b: T,
}

impl<T: Coeff> RickerParams<T> {
    pub fn new(r: T, a: T, b: T) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidParams("a must be nonzero (t = r/a)".into()));
        }
        Ok(RickerParams { r, a, b })
    }

    pub fn t(&self) -> Result<T> {
        if self.a.is_zero() {
            return Err(Error::InvalidParams("a must be nonzero (t = r/a)".into()));
        }
        Ok(self.r.clone() / self.a.clone())
    }
}

pub fn ricker_quadratic<T: Coeff>(p: &RickerParams<T>) -> Result<MonicPolynomial<T>> {
    let (lin, constant) = ricker_coefficients(&p.r, &p.a, &p.b)
        .ok_or_else(|| Error::InvalidParams("a must be nonzero (t = r/a)".into()))?;
    MonicPolynomial::new(vec![constant, -lin])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "stage")]
pub enum RickerVerdict {
    StableSufficient(usize),
    Unknown,
    UnstableNecessary,
}

impl RickerVerdict {
    pub fn name(self) -> String {
        match self {
            RickerVerdict::StableSufficient(s) => format!("stable_sufficient({s})"),
            RickerVerdict::Unknown => "unknown".into(),
            RickerVerdict::UnstableNecessary => "unstable_necessary".into(),
        }
    }
}

/// The linear factor `x - r + 1` needs `0 < r < 2`; the quadratic factor is
/// handed to the stage algorithm.
pub fn ricker_verdict<T: Coeff>(p: &RickerParams<T>, cfg: &AlgoConfig) -> Result<RickerVerdict> {
    let quad = ricker_quadratic(p)?;
    if !(p.r > T::zero() && p.r < T::from_i64(2)) {
        return Ok(RickerVerdict::UnstableNecessary);
    }
    let cert = run_algorithm(&quad, cfg);
    Ok(match (cert.verdict, cert.deciding_stage) {
        (Verdict::Certified, Some(s)) if s <= cfg.max_stages => RickerVerdict::StableSufficient(s),
        _ => RickerVerdict::Unknown,
    })
}

/// Condition (i): `|A| + |B| < 1`.
pub fn ricker_condition_i<T: Coeff>(r: &T, a: &T, b: &T) -> Option<bool> {
    let (lin, constant) = ricker_coefficients(r, a, b)?;
    Some(lin.abs() + constant.abs() < T::one())
}

/// Condition (ii): `|A^2 - B| + |A| |B| < 1`.
pub fn ricker_condition_ii<T: Coeff>(r: &T, a: &T, b: &T) -> Option<bool> {
    let (lin, constant) = ricker_coefficients(r, a, b)?;
    let sq = lin.clone() * lin.clone() - constant.clone();
    Some(sq.abs() + lin.abs() * constant.abs() < T::one())
}
