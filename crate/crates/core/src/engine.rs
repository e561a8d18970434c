//! Iterated ℓ1 stability test.
//!
//! A monic `p(x) = x^n + a_{n-1}x^{n-1} + ... + a_0` is associated with the
//! recurrence `x_{k+1} = -a_{n-1}x_k - ... - a_0 x_{k-n+1}`. If the sum of
//! the absolute values of its coefficients is below one, `p` is Schur
//! stable. When it is not, the recurrence is substituted into itself to get
//! a longer-delay recurrence whose solutions include those of the original,
//! and the test is repeated on the new coefficients.
//!
//! At stage `i` the characteristic polynomial of the iterated recurrence is
//!
//! ```text
//! Q_i(x) = x^{n+i} + beta_{n-1} x^{n-1} + ... + beta_0
//! ```
//!
//! and one substitution into the most recent variable is the polynomial
//! step `Q_{i+1} = x Q_i - beta_{n-1} p`. Equivalently
//! `Q_i = x^{n+i} - (x^{n+i} mod p)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{write_power_sum, AnyMonic, MonicPolynomial};
use crate::scalar::{Backend, Coeff, Rational, Scalar};

/// Tail of the stage-`i` characteristic polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct StageTrace<T> {
    pub stage: usize,
    /// `beta_0..beta_{n-1}`.
    pub beta: Vec<T>,
    /// `sum |beta_m|`.
    pub tail_sum: T,
}

impl<T: Coeff> StageTrace<T> {
    pub fn initial(p: &MonicPolynomial<T>) -> Self {
        Self::from_beta(0, p.coeffs().to_vec())
    }

    pub fn from_beta(stage: usize, beta: Vec<T>) -> Self {
        let tail_sum = beta.iter().fold(T::zero(), |acc, b| acc + b.abs());
        Self { stage, beta, tail_sum }
    }

    /// Degree of `Q_i`.
    pub fn degree(&self) -> usize {
        self.beta.len() + self.stage
    }

    /// Human-readable `Q_i`, e.g. `x^6 - 1/4x^4 - 1/2x^2 - 1/4x + 1/4`.
    pub fn polynomial_string(&self) -> String {
        let mut s = String::new();
        let _ = write_power_sum(&mut s, self.degree(), &self.beta);
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Some stage has tail sum strictly below one.
    Certified,
    /// A necessary condition fails strictly, or the ℓ1 test fails on a sign
    /// pattern where it is exact.
    DefinitelyUnstable,
    /// No stage up to the budget certified; says nothing about stability.
    Inconclusive,
    /// A necessary condition holds with equality, or (float backend) the
    /// deciding tail sum is within epsilon of one.
    Boundary,
}

impl Verdict {
    /// CLI exit code.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Certified => 0,
            Verdict::DefinitelyUnstable => 1,
            Verdict::Inconclusive => 2,
            Verdict::Boundary => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::DefinitelyUnstable => "definitely_unstable",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Boundary => "boundary",
        }
    }
}

/// Outcome of one strict inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Holds,
    Equality,
    Violated,
}

impl Condition {
    fn strictly_less<T: Coeff>(lhs: &T, rhs: &T) -> Self {
        if lhs < rhs {
            Condition::Holds
        } else if lhs == rhs {
            Condition::Equality
        } else {
            Condition::Violated
        }
    }

    pub fn holds(self) -> bool {
        self == Condition::Holds
    }
}

/// `|p(0)| < 1`, `p(1) > 0`, `(-1)^n p(-1) > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessaryChecks {
    pub constant_term: Condition,
    pub at_one: Condition,
    pub at_minus_one: Condition,
}

impl NecessaryChecks {
    pub fn as_triple(&self) -> (bool, bool, bool) {
        (
            self.constant_term.holds(),
            self.at_one.holds(),
            self.at_minus_one.holds(),
        )
    }

    pub fn all_hold(&self) -> bool {
        self.conditions().iter().all(|c| c.holds())
    }

    pub fn any_violated(&self) -> bool {
        self.conditions().contains(&Condition::Violated)
    }

    pub fn conditions(&self) -> [Condition; 3] {
        [self.constant_term, self.at_one, self.at_minus_one]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgoConfig {
    pub max_stages: usize,
    /// Float backend only: a deciding tail sum in `[1 - eps, 1)` is reported
    /// as [`Verdict::Boundary`].
    pub float_boundary_epsilon: f64,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        Self {
            max_stages: 64,
            float_boundary_epsilon: 1e-9,
        }
    }
}

impl AlgoConfig {
    pub fn with_max_stages(max_stages: usize) -> Self {
        Self {
            max_stages,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<T> {
    pub verdict: Verdict,
    pub deciding_stage: Option<usize>,
    pub trace: Vec<StageTrace<T>>,
    pub necessary: NecessaryChecks,
    pub sign_pattern_exact: bool,
}

impl<T: Coeff> Certificate<T> {
    pub fn tail_sums(&self) -> impl Iterator<Item = &T> {
        self.trace.iter().map(|t| &t.tail_sum)
    }
}

/// `||p||_1 < 2`.
pub fn check_l1<T: Coeff>(p: &MonicPolynomial<T>) -> bool {
    p.tail_l1() < T::one()
}

pub fn necessary_checks<T: Coeff>(p: &MonicPolynomial<T>) -> NecessaryChecks {
    let one = T::one();
    let zero = T::zero();
    let at_minus_one = p.eval(&-one.clone());
    let alternating = if p.degree().is_multiple_of(2) {
        at_minus_one
    } else {
        -at_minus_one
    };
    NecessaryChecks {
        constant_term: Condition::strictly_less(&p.coeff(0).abs(), &one),
        at_one: Condition::strictly_less(&zero, &p.eval(&one)),
        at_minus_one: Condition::strictly_less(&zero, &alternating),
    }
}

/// True when the coefficients are all strictly negative, or when
/// `(-1)^{k+n} a_k < 0` for every `k`. On either pattern `||p||_1 < 2` is
/// necessary as well as sufficient.
pub fn sign_pattern_exact<T: Coeff>(p: &MonicPolynomial<T>) -> bool {
    let n = p.degree();
    let all_negative = p.coeffs().iter().all(|a| a.is_negative());
    let alternating = p.coeffs().iter().enumerate().all(|(k, a)| {
        if (k + n).is_multiple_of(2) {
            a.is_negative()
        } else {
            a.is_positive()
        }
    });
    all_negative || alternating
}

/// One substitution: `Q_{i+1} = x Q_i - beta_{n-1} p`.
pub fn iterate_stage<T: Coeff>(prev: &StageTrace<T>, p: &MonicPolynomial<T>) -> StageTrace<T> {
    let a = p.coeffs();
    let n = a.len();
    debug_assert_eq!(prev.beta.len(), n);
    let top = prev.beta[n - 1].clone();
    let mut beta = Vec::with_capacity(n);
    beta.push(-(top.clone() * a[0].clone()));
    for m in 1..n {
        beta.push(prev.beta[m - 1].clone() - top.clone() * a[m].clone());
    }
    StageTrace::from_beta(prev.stage + 1, beta)
}

/// Substitutes the recurrence into its first variable with a nonzero
/// coefficient, working directly on lagged coefficients
/// `y_{k+1} = sum_l c_l y_{k+1-l}`. If the first nonzero coefficient is
/// `a_{n-j}` the result is the stage-`j` trace. For `p = x^n` there is
/// nothing to substitute and the stage-0 trace is returned.
pub fn substitute_general<T: Coeff>(p: &MonicPolynomial<T>) -> StageTrace<T> {
    let n = p.degree();
    // c[l] multiplies y_{k+1-l}; c[0] unused.
    let base: Vec<T> = (0..=n)
        .map(|l| if l == 0 { T::zero() } else { -p.coeff(n - l) })
        .collect();
    let Some(j) = (1..=n).find(|&l| !base[l].is_zero()) else {
        return StageTrace::initial(p);
    };
    let mut c = vec![T::zero(); n + j + 1];
    for l in 1..=n {
        if l != j {
            c[l] = base[l].clone();
        }
    }
    for l in 1..=n {
        c[j + l] = c[j + l].clone() + base[j].clone() * base[l].clone();
    }
    // Q(x) = x^{n+j} - sum_l c_l x^{n+j-l}; only powers below n survive.
    let total = n + j;
    let beta = (0..n).map(|m| -c[total - m].clone()).collect();
    debug_assert!((1..=j).all(|l| c[l].is_zero()));
    StageTrace::from_beta(j, beta)
}

pub fn run_algorithm<T: Coeff>(p: &MonicPolynomial<T>, cfg: &AlgoConfig) -> Certificate<T> {
    let necessary = necessary_checks(p);
    let sign_exact = sign_pattern_exact(p);
    let mut trace = vec![StageTrace::initial(p)];
    let finish = |verdict, deciding_stage, trace| Certificate {
        verdict,
        deciding_stage,
        trace,
        necessary,
        sign_pattern_exact: sign_exact,
    };

    if necessary.any_violated() {
        return finish(Verdict::DefinitelyUnstable, None, trace);
    }
    if !necessary.all_hold() {
        return finish(Verdict::Boundary, None, trace);
    }

    let one = T::one();
    loop {
        let current = trace.last().expect("trace starts non-empty");
        if current.tail_sum < one {
            let stage = current.stage;
            let margin = (one.clone() - current.tail_sum.clone()).to_f64();
            let verdict = if T::BACKEND == Backend::Float && margin <= cfg.float_boundary_epsilon {
                Verdict::Boundary
            } else {
                Verdict::Certified
            };
            return finish(verdict, Some(stage), trace);
        }
        if current.stage == 0 && sign_exact {
            return finish(Verdict::DefinitelyUnstable, Some(0), trace);
        }
        if current.stage >= cfg.max_stages {
            return finish(Verdict::Inconclusive, None, trace);
        }
        let next = iterate_stage(current, p);
        trace.push(next);
    }
}

/// Degree-2 closed recurrence for `x^2 - alpha x + beta`:
/// `s_0 = alpha`, `t_0 = -beta`, `s_j = s_0 s_{j-1} + t_{j-1}`,
/// `t_j = t_0 s_{j-1}`. Stage `j` certifies iff `|s_j| + |t_j| < 1`.
pub fn degree2_st<T: Coeff>(alpha: &T, beta: &T, j: usize) -> (T, T) {
    let s0 = alpha.clone();
    let t0 = -beta.clone();
    let (mut s, mut t) = (s0.clone(), t0.clone());
    for _ in 0..j {
        let s_next = s0.clone() * s.clone() + t;
        t = t0.clone() * s;
        s = s_next;
    }
    (s, t)
}

/// Serializable form of a [`Certificate`]. Numbers are strings: exact
/// fractions (`"23/32"`) for the rational backend, decimal for floats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub verdict: Verdict,
    pub stage: Option<usize>,
    pub backend: Backend,
    pub degree: usize,
    /// `a_0..a_{n-1}`.
    pub coefficients: Vec<String>,
    pub tail_sums: Vec<String>,
    pub necessary_checks: [bool; 3],
    pub sign_pattern_exact: bool,
}

impl CertificateJson {
    pub fn new<T: Coeff>(p: &MonicPolynomial<T>, cert: &Certificate<T>) -> Self {
        let (c, one, minus_one) = cert.necessary.as_triple();
        Self {
            verdict: cert.verdict,
            stage: cert.deciding_stage,
            backend: T::BACKEND,
            degree: p.degree(),
            coefficients: p.coeffs().iter().map(Coeff::render).collect(),
            tail_sums: cert.tail_sums().map(Coeff::render).collect(),
            necessary_checks: [c, one, minus_one],
            sign_pattern_exact: cert.sign_pattern_exact,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::invalid(format!("bad certificate JSON: {e}")))
    }

    /// Recomputes the tail sums from the stored coefficients with the same
    /// stage budget and checks they and the verdict match.
    pub fn revalidate(&self, cfg: &AlgoConfig) -> Result<()> {
        let values = self
            .coefficients
            .iter()
            .map(|s| Scalar::parse(s, self.backend))
            .collect::<Result<Vec<_>>>()?;
        let mut descending: Vec<Scalar> = values.into_iter().rev().collect();
        descending.insert(
            0,
            match self.backend {
                Backend::Exact => Scalar::Exact(Rational::from_i64(1)),
                Backend::Float => Scalar::Float(1.0),
            },
        );
        let recomputed = match AnyMonic::from_scalars_descending(&descending)? {
            AnyMonic::Exact(p) => CertificateJson::new(&p, &run_algorithm(&p, cfg)),
            AnyMonic::Float(p) => CertificateJson::new(&p, &run_algorithm(&p, cfg)),
        };
        if recomputed.tail_sums != self.tail_sums {
            return Err(Error::invalid("tail sums do not match recomputation"));
        }
        if recomputed.verdict != self.verdict || recomputed.stage != self.stage {
            return Err(Error::invalid("verdict does not match recomputation"));
        }
        if recomputed.necessary_checks != self.necessary_checks {
            return Err(Error::invalid("necessary checks do not match recomputation"));
        }
        Ok(())
    }
}

/// Runs the algorithm on whichever backend `p` carries and returns the
/// serializable certificate.
pub fn check_any(p: &AnyMonic, cfg: &AlgoConfig) -> CertificateJson {
    match p {
        AnyMonic::Exact(p) => CertificateJson::new(p, &run_algorithm(p, cfg)),
        AnyMonic::Float(p) => CertificateJson::new(p, &run_algorithm(p, cfg)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::normalize;
    use crate::scalar::q;
    use num_traits::Signed;

    fn example61() -> MonicPolynomial<Rational> {
        normalize(&[q(1, 1), q(1, 2), q(0, 1), q(0, 1), q(-1, 2), q(-1, 2)]).unwrap()
    }

    fn cournot_p3() -> MonicPolynomial<Rational> {
        // x^3 - 1/2 x^2 + 1/2
        MonicPolynomial::new(vec![q(1, 2), q(0, 1), q(-1, 2)]).unwrap()
    }

    fn rat(p: &[(i64, i64)]) -> MonicPolynomial<Rational> {
        MonicPolynomial::new(p.iter().map(|&(a, b)| q(a, b)).collect()).unwrap()
    }

    #[test]
    fn l1_examples() {
        assert!(!check_l1(&example61()));
        assert!(check_l1(&MonicPolynomial::new(vec![0.4, -0.3]).unwrap()));
        assert!(!check_l1(&cournot_p3()));
        assert_eq!(cournot_p3().l1_norm(), q(2, 1));
    }

    #[test]
    fn necessary_check_examples() {
        assert_eq!(necessary_checks(&example61()).as_triple(), (true, true, true));
        let c = necessary_checks(&rat(&[(1, 1), (-3, 1)]));
        assert_eq!(c.at_one, Condition::Violated);
        assert_eq!(c.constant_term, Condition::Equality);
        let c = necessary_checks(&rat(&[(-1, 1)]));
        assert_eq!(c.at_one, Condition::Equality);
        assert!(!c.any_violated());
        assert_eq!(
            run_algorithm(&rat(&[(-1, 1)]), &AlgoConfig::default()).verdict,
            Verdict::Boundary
        );
    }

    #[test]
    fn sign_pattern_examples() {
        assert!(sign_pattern_exact(&rat(&[(-1, 10), (-3, 10), (-2, 10)])));
        // n = 3: a_2 > 0, a_1 < 0, a_0 > 0
        assert!(sign_pattern_exact(&rat(&[(1, 5), (-1, 5), (1, 5)])));
        assert!(!sign_pattern_exact(&rat(&[(2, 5), (-3, 10)])));
        // zeros break the strict pattern
        assert!(!sign_pattern_exact(&rat(&[(-1, 5), (0, 1), (-1, 5)])));
    }

    #[test]
    fn table3_stage_polynomials() {
        let p = example61();
        let mut t = StageTrace::initial(&p);
        let expected = [
            ("x^5 + 1/2x^4 - 1/2x - 1/2", q(3, 2)),
            ("x^6 - 1/4x^4 - 1/2x^2 - 1/4x + 1/4", q(5, 4)),
            ("x^7 + 1/8x^4 - 1/2x^3 - 1/4x^2 + 1/8x - 1/8", q(9, 8)),
            ("x^8 - 9/16x^4 - 1/4x^3 + 1/8x^2 - 1/16x + 1/16", q(17, 16)),
            ("x^9 + 1/32x^4 + 1/8x^3 - 1/16x^2 - 7/32x - 9/32", q(23, 32)),
        ];
        for (i, (poly, sum)) in expected.iter().enumerate() {
            assert_eq!(t.stage, i);
            assert_eq!(&t.polynomial_string(), poly);
            assert_eq!(&t.tail_sum, sum);
            t = iterate_stage(&t, &p);
        }
    }

    #[test]
    fn example61_certifies_at_stage_four() {
        let cert = run_algorithm(&example61(), &AlgoConfig::default());
        assert_eq!(cert.verdict, Verdict::Certified);
        assert_eq!(cert.deciding_stage, Some(4));
        let sums: Vec<_> = cert.tail_sums().cloned().collect();
        assert_eq!(sums, vec![q(3, 2), q(5, 4), q(9, 8), q(17, 16), q(23, 32)]);
    }

    #[test]
    fn cournot_p3_certifies_at_stage_two() {
        let cert = run_algorithm(&cournot_p3(), &AlgoConfig::default());
        assert_eq!(cert.verdict, Verdict::Certified);
        assert_eq!(cert.deciding_stage, Some(2));
        let sums: Vec<_> = cert.tail_sums().cloned().collect();
        assert_eq!(sums, vec![q(1, 1), q(1, 1), q(3, 4)]);

        let capped = run_algorithm(&cournot_p3(), &AlgoConfig::with_max_stages(1));
        assert_eq!(capped.verdict, Verdict::Inconclusive);
        assert_eq!(capped.trace.len(), 2);
    }

    #[test]
    fn unstable_by_necessary_check() {
        let cert = run_algorithm(&rat(&[(1, 1), (-3, 1)]), &AlgoConfig::default());
        assert_eq!(cert.verdict, Verdict::DefinitelyUnstable);
        assert_eq!(cert.verdict.exit_code(), 1);
    }

    #[test]
    fn monomial_certifies_at_stage_zero() {
        let p = MonicPolynomial::<Rational>::monomial(3).unwrap();
        let cert = run_algorithm(&p, &AlgoConfig::with_max_stages(0));
        assert_eq!((cert.verdict, cert.deciding_stage), (Verdict::Certified, Some(0)));
        assert_eq!(substitute_general(&p), StageTrace::initial(&p));
    }

    #[test]
    fn float_backend_boundary() {
        // tail sum 1 - 1e-12 at stage 0
        let p = MonicPolynomial::new(vec![0.5, 0.0, -(0.5 - 1e-12)]).unwrap();
        let cert = run_algorithm(&p, &AlgoConfig::default());
        assert_eq!(cert.verdict, Verdict::Boundary);
        assert_eq!(cert.deciding_stage, Some(0));
        let p = MonicPolynomial::new(vec![0.25, -0.3]).unwrap();
        assert_eq!(run_algorithm(&p, &AlgoConfig::default()).verdict, Verdict::Certified);
    }

    #[test]
    fn exact_sum_of_one_is_not_certification() {
        let p = rat(&[(1, 2), (1, 2)]); // x^2 + 1/2 x + 1/2, tail sum 1
        let cert = run_algorithm(&p, &AlgoConfig::with_max_stages(0));
        assert_eq!(cert.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn substitute_general_matches_lag_form() {
        let (alpha, beta) = (q(3, 5), q(1, 3));
        let p = MonicPolynomial::new(vec![beta.clone(), -alpha.clone()]).unwrap();
        let t = substitute_general(&p);
        assert_eq!(t.stage, 1);
        // Q = x^3 + (beta - alpha^2) x + alpha beta
        assert_eq!(
            t.beta,
            vec![
                alpha.clone() * beta.clone(),
                beta.clone() - alpha.clone() * alpha.clone()
            ]
        );
        let (s1, t1) = degree2_st(&alpha, &beta, 1);
        assert_eq!(s1, alpha.clone() * alpha.clone() - beta.clone());
        assert_eq!(t1, -(alpha * beta));
    }

    #[test]
    fn substitute_general_with_gap() {
        // x^3 + a0: gap j = 3, Q = x^6 - a0^2
        let a0 = q(-2, 3);
        let p = MonicPolynomial::new(vec![a0.clone(), q(0, 1), q(0, 1)]).unwrap();
        let t = substitute_general(&p);
        assert_eq!(t.stage, 3);
        assert_eq!(t.beta, vec![-(a0.clone() * a0.clone()), q(0, 1), q(0, 1)]);
        assert_eq!(t.tail_sum, a0.clone() * a0);
        let mut it = StageTrace::initial(&p);
        for _ in 0..3 {
            it = iterate_stage(&it, &p);
        }
        assert_eq!(it, t);
    }

    #[test]
    fn degree2_examples() {
        let (alpha, beta) = (q(7, 10), q(2, 5));
        assert_eq!(degree2_st(&alpha, &beta, 0), (alpha.clone(), -beta.clone()));
        let (s2, t2) = degree2_st(&alpha, &beta, 2);
        let a2 = alpha.clone() * alpha.clone();
        assert_eq!(s2, alpha.clone() * (a2.clone() - q(2, 1) * beta.clone()));
        assert_eq!(t2, -(beta.clone() * (a2 - beta.clone())));
        let (s1, t1) = degree2_st(&q(1, 1), &q(1, 2), 1);
        assert_eq!((s1.clone(), t1.clone()), (q(1, 2), q(-1, 2)));
        assert_eq!(s1.abs() + t1.abs(), q(1, 1));
    }

    #[test]
    fn certificate_json_round_trip() {
        let p = example61();
        let cfg = AlgoConfig::default();
        let json = CertificateJson::new(&p, &run_algorithm(&p, &cfg));
        assert_eq!(json.tail_sums, ["3/2", "5/4", "9/8", "17/16", "23/32"]);
        let text = json.to_json();
        let back = CertificateJson::from_json(&text).unwrap();
        assert_eq!(back, json);
        back.revalidate(&cfg).unwrap();
        let mut tampered = back;
        tampered.tail_sums[4] = "3/4".into();
        assert!(tampered.revalidate(&cfg).is_err());
    }
}
