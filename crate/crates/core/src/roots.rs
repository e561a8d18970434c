//! Numerical root oracle (Aberth–Ehrlich simultaneous iteration in binary64).
//!
//! Used to cross-check certificates; it never feeds back into a verdict.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::MonicPolynomial;
use crate::scalar::Coeff;

pub const DEFAULT_MARGIN: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    pub max_iterations: usize,
    /// Extra restarts with a perturbed initial radius.
    pub retries: usize,
    /// Rotates the initial angles; a fixed seed gives a fixed ordering.
    pub seed: u64,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            max_iterations: 500,
            retries: 4,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootJson {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub max_modulus: f64,
    /// `max |p(z)| / max(1, |z|)^n` over the computed roots.
    pub residual: f64,
}

impl RootSet {
    pub fn to_json_values(&self) -> Vec<RootJson> {
        self.roots
            .iter()
            .map(|z| RootJson {
                re: z.re,
                im: z.im,
                modulus: z.norm(),
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_values()).expect("roots serialize")
    }

    /// Expands `prod (x - z_i)`, returning ascending complex coefficients
    /// (leading one included).
    pub fn expand(&self) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for z in &self.roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= ck * z;
            }
            c = next;
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchurNumeric {
    Inside,
    Outside,
    NearCircle,
}

pub fn find_roots<T: Coeff>(p: &MonicPolynomial<T>) -> Result<RootSet> {
    find_roots_with(p, &RootConfig::default())
}

pub fn find_roots_with<T: Coeff>(p: &MonicPolynomial<T>, cfg: &RootConfig) -> Result<RootSet> {
    let coeffs: Vec<f64> = p.coeffs().iter().map(Coeff::to_f64).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("coefficient is not finite in binary64"));
    }
    let n = coeffs.len();
    let norm1 = 1.0 + coeffs.iter().map(|c| c.abs()).sum::<f64>();
    let tolerance = 1e-10 * norm1;
    let base_radius = (norm1 - 1.0).max(1.0);

    for attempt in 0..=cfg.retries {
        let radius = base_radius * (1.0 + 0.13 * attempt as f64);
        let Some(mut roots) = aberth(
            &coeffs,
            radius,
            cfg.seed.wrapping_add(attempt as u64),
            cfg.max_iterations,
        ) else {
            continue;
        };
        polish(&coeffs, &mut roots);
        let residual = scaled_residual(&coeffs, &roots);
        if residual <= tolerance {
            pair_conjugates(&mut roots, n);
            let max_modulus = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
            return Ok(RootSet {
                roots,
                max_modulus,
                residual,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iterations * (cfg.retries + 1),
    })
}

pub fn is_schur_numeric<T: Coeff>(p: &MonicPolynomial<T>, margin: f64) -> Result<SchurNumeric> {
    if margin.is_nan() || margin <= 0.0 {
        return Err(Error::invalid("margin must be positive"));
    }
    let roots = find_roots(p)?;
    Ok(classify_modulus(roots.max_modulus, margin))
}

pub fn classify_modulus(max_modulus: f64, margin: f64) -> SchurNumeric {
    if max_modulus < 1.0 - margin {
        SchurNumeric::Inside
    } else if max_modulus > 1.0 + margin {
        SchurNumeric::Outside
    } else {
        SchurNumeric::NearCircle
    }
}

/// Value and derivative of the monic polynomial with ascending tail `a`.
fn eval_with_derivative(a: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::new(1.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for &c in a.iter().rev() {
        deriv = deriv * z + value;
        value = value * z + c;
    }
    (value, deriv)
}

fn initial_guesses(n: usize, radius: f64, seed: u64) -> Vec<Complex64> {
    // golden-ratio offset keeps the start off any symmetry axis of real input
    let offset = 0.618_033_988_749_894_9 + 0.377_964_473 * (seed % 1024) as f64;
    (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * (k as f64 + offset) / n as f64;
            Complex64::from_polar(radius, theta)
        })
        .collect()
}

fn aberth(a: &[f64], radius: f64, seed: u64, max_iterations: usize) -> Option<Vec<Complex64>> {
    let n = a.len();
    let mut z = initial_guesses(n, radius, seed);
    let mut converged = vec![false; n];
    for _ in 0..max_iterations {
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (f, df) = eval_with_derivative(a, z[i]);
            if f == Complex64::new(0.0, 0.0) {
                converged[i] = true;
                continue;
            }
            let ratio = f / df;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d == Complex64::new(0.0, 0.0) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() == 0.0 || !denom.is_finite() {
                ratio
            } else {
                ratio / denom
            };
            if !step.is_finite() {
                return None;
            }
            z[i] -= step;
            let scale = z[i].norm().max(1.0);
            if step.norm() <= 4.0 * f64::EPSILON * scale {
                converged[i] = true;
            }
        }
        if converged.iter().all(|&c| c) {
            return Some(z);
        }
    }
    // Multiple roots converge slowly in correction size; accept if the
    // residual already sits at rounding level.
    let norm1 = 1.0 + a.iter().map(|c| c.abs()).sum::<f64>();
    (scaled_residual(a, &z) <= 1e-12 * norm1).then_some(z)
}

fn polish(a: &[f64], z: &mut [Complex64]) {
    for zi in z.iter_mut() {
        for _ in 0..2 {
            let (f, df) = eval_with_derivative(a, *zi);
            if df.norm() == 0.0 {
                break;
            }
            let cand = *zi - f / df;
            let (fc, _) = eval_with_derivative(a, cand);
            if cand.is_finite() && fc.norm() < f.norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }
}

fn scaled_residual(a: &[f64], z: &[Complex64]) -> f64 {
    let n = a.len() as i32;
    z.iter()
        .map(|&zi| eval_with_derivative(a, zi).0.norm() / zi.norm().max(1.0).powi(n))
        .fold(0.0, f64::max)
}

/// Snaps near-real roots to the real axis and orders the rest as
/// conjugate pairs (positive imaginary part first), then sorts by
/// `(re, im)` for deterministic output.
fn pair_conjugates(z: &mut [Complex64], n: usize) {
    let tol = 1e-9 * (n as f64);
    for zi in z.iter_mut() {
        if zi.im.abs() <= tol * zi.norm().max(1.0) {
            zi.im = 0.0;
        }
    }
    let mut used = vec![false; z.len()];
    for i in 0..z.len() {
        if used[i] || z[i].im <= 0.0 {
            continue;
        }
        let target = z[i].conj();
        let partner = (0..z.len())
            .filter(|&j| !used[j] && j != i && z[j].im < 0.0)
            .min_by(|&x, &y| (z[x] - target).norm().total_cmp(&(z[y] - target).norm()));
        if let Some(j) = partner {
            let re = 0.5 * (z[i].re + z[j].re);
            let im = 0.5 * (z[i].im - z[j].im);
            z[i] = Complex64::new(re, im);
            z[j] = Complex64::new(re, -im);
            used[i] = true;
            used[j] = true;
        }
    }
    z.sort_by(|x, y| x.re.total_cmp(&y.re).then(y.im.total_cmp(&x.im)));
}
