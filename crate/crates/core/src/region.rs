//! Exact coefficient loci for degrees 2 and 3, and a parameter-plane scanner
//! that records the first certifying stage of every grid node.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cases::ricker_coefficients;
use crate::engine::{run_algorithm, AlgoConfig};
use crate::error::{Error, Result};
use crate::jury::{jury_verdict, JuryVerdict};
use crate::poly::MonicPolynomial;
use crate::scalar::{parse_rational, Backend, Coeff, Rational, Scalar};

/// Cell value for "not certified within the stage budget".
pub const NOT_CERTIFIED: i32 = -1;
/// Cell value for nodes where the mapping is undefined.
pub const INVALID: i32 = -2;

/// `z^2 + a1 z + a0` has both roots in the open unit disk.
pub fn c2<T: Coeff>(a0: &T, a1: &T) -> bool {
    let one = T::one();
    *a0 < one && a0.clone() + a1.clone() > -one.clone() && a0.clone() - a1.clone() > -one
}

/// `z^3 + a2 z^2 + a1 z + a0` has all roots in the open unit disk, in the
/// three-inequality form `-1 < a0 < 1`, `a0^2 - 1 < a0 a2 - a1`,
/// `|a0 + a2| < 1 + a1`.
pub fn c3<T: Coeff>(a0: &T, a1: &T, a2: &T) -> bool {
    let one = T::one();
    -one.clone() < *a0
        && *a0 < one
        && a0.clone() * a0.clone() - one.clone() < a0.clone() * a2.clone() - a1.clone()
        && (a0.clone() + a2.clone()).abs() < one + a1.clone()
}

pub fn c2_membership(a0: &Scalar, a1: &Scalar) -> Result<bool> {
    match (a0, a1) {
        (Scalar::Exact(a0), Scalar::Exact(a1)) => Ok(c2(a0, a1)),
        (Scalar::Float(a0), Scalar::Float(a1)) => Ok(c2(a0, a1)),
        _ => Err(Error::BackendMismatch),
    }
}

pub fn c3_membership(a0: &Scalar, a1: &Scalar, a2: &Scalar) -> Result<bool> {
    match (a0, a1, a2) {
        (Scalar::Exact(a0), Scalar::Exact(a1), Scalar::Exact(a2)) => Ok(c3(a0, a1, a2)),
        (Scalar::Float(a0), Scalar::Float(a1), Scalar::Float(a2)) => Ok(c3(a0, a1, a2)),
        _ => Err(Error::BackendMismatch),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub min: Rational,
    pub max: Rational,
    pub steps: usize,
}

impl Axis {
    pub fn new(name: impl Into<String>, min: Rational, max: Rational, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::invalid("axis needs at least 2 steps"));
        }
        if min >= max {
            return Err(Error::invalid("axis min must be below max"));
        }
        Ok(Axis {
            name: name.into(),
            min,
            max,
            steps,
        })
    }

    pub fn parse(name: &str, min: &str, max: &str, steps: usize) -> Result<Self> {
        Axis::new(name, parse_rational(min)?, parse_rational(max)?, steps)
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, k: usize) -> Rational {
        let span = &self.max - &self.min;
        &self.min + span * Rational::from_integer(k.into()) / Rational::from_integer(self.steps.into())
    }

    pub fn nodes(&self) -> Vec<Rational> {
        (0..self.len()).map(|k| self.node(k)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mapping {
    /// `(alpha, beta) -> x^2 - alpha x + beta`.
    QuadraticAlphaBeta,
    /// `(b, a) -> x^2 - (r + 2 - 3t) x + 1 + (a - 3) t + b t^2`, `t = r / a`.
    RickerBa { r: Rational },
    /// `(a0, a1) -> x^2 + a1 x + a0`.
    CoeffsN2,
    /// `(a0, a1) -> x^3 + a2 x^2 + a1 x + a0` at fixed `a2`.
    CoeffsN3 { a2: Rational },
}

impl Mapping {
    pub const NAMES: [&'static str; 4] = ["quadratic-alpha-beta", "ricker-ba", "coeffs-n2", "coeffs-n3"];

    /// `param` is `r` for "ricker-ba" and `a2` for "coeffs-n3" (default 0 for
    /// `a2`, 1 for `r`).
    pub fn from_name(name: &str, param: Option<Rational>) -> Result<Self> {
        match name {
            "quadratic-alpha-beta" => Ok(Mapping::QuadraticAlphaBeta),
            "ricker-ba" => Ok(Mapping::RickerBa {
                r: param.unwrap_or_else(Rational::one),
            }),
            "coeffs-n2" => Ok(Mapping::CoeffsN2),
            "coeffs-n3" => Ok(Mapping::CoeffsN3 {
                a2: param.unwrap_or_else(Rational::zero),
            }),
            other => Err(Error::UnknownMapping(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mapping::QuadraticAlphaBeta => "quadratic-alpha-beta",
            Mapping::RickerBa { .. } => "ricker-ba",
            Mapping::CoeffsN2 => "coeffs-n2",
            Mapping::CoeffsN3 { .. } => "coeffs-n3",
        }
    }

    pub fn param(&self) -> Option<&Rational> {
        match self {
            Mapping::RickerBa { r } => Some(r),
            Mapping::CoeffsN3 { a2 } => Some(a2),
            _ => None,
        }
    }

    pub fn default_axes(&self) -> (Axis, Axis) {
        let r = |s: &str| parse_rational(s).expect("literal");
        let axis = |n: &str, lo: &str, hi: &str, steps| Axis::new(n, r(lo), r(hi), steps).expect("valid axis");
        match self {
            Mapping::QuadraticAlphaBeta => (axis("alpha", "-5/2", "5/2", 500), axis("beta", "-3/2", "3/2", 300)),
            Mapping::RickerBa { .. } => (axis("b", "0", "5/2", 250), axis("a", "0", "33/10", 330)),
            Mapping::CoeffsN2 => (axis("a0", "-3/2", "3/2", 300), axis("a1", "-5/2", "5/2", 500)),
            Mapping::CoeffsN3 { .. } => (axis("a0", "-3/2", "3/2", 300), axis("a1", "-3", "3", 600)),
        }
    }

    /// Polynomial at `(x, y)`, or `None` where the mapping is undefined.
    pub fn polynomial<T: Coeff>(&self, x: &T, y: &T) -> Option<MonicPolynomial<T>> {
        let tail = match self {
            Mapping::QuadraticAlphaBeta => vec![y.clone(), -x.clone()],
            Mapping::RickerBa { r } => {
                let (lin, constant) = ricker_coefficients(&T::from_rational(r), y, x)?;
                vec![constant, -lin]
            }
            Mapping::CoeffsN2 => vec![x.clone(), y.clone()],
            Mapping::CoeffsN3 { a2 } => vec![x.clone(), y.clone(), T::from_rational(a2)],
        };
        MonicPolynomial::new(tail).ok()
    }

    /// Exact locus membership when one is known for this mapping.
    fn locus(&self, p: &MonicPolynomial<Rational>) -> Option<bool> {
        let a = p.coeffs();
        match a.len() {
            2 => Some(c2(&a[0], &a[1])),
            3 => Some(c3(&a[0], &a[1], &a[2])),
            _ => None,
        }
    }
}

impl fmt::Display for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mapping {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mapping::from_name(s, None)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub mapping: Mapping,
    pub backend: Backend,
    pub max_stages: usize,
}

impl GridSpec {
    pub fn new(mapping: Mapping, backend: Backend, max_stages: usize) -> Self {
        let (x_axis, y_axis) = mapping.default_axes();
        GridSpec {
            x_axis,
            y_axis,
            mapping,
            backend,
            max_stages,
        }
    }

    pub fn width(&self) -> usize {
        self.x_axis.len()
    }

    pub fn height(&self) -> usize {
        self.y_axis.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    Stable,
    Unstable,
    Boundary,
    Invalid,
}

impl Truth {
    pub fn name(self) -> &'static str {
        match self {
            Truth::Stable => "stable",
            Truth::Unstable => "unstable",
            Truth::Boundary => "boundary",
            Truth::Invalid => "invalid",
        }
    }
}

impl From<JuryVerdict> for Truth {
    fn from(v: JuryVerdict) -> Self {
        match v {
            JuryVerdict::Stable => Truth::Stable,
            JuryVerdict::Unstable => Truth::Unstable,
            JuryVerdict::Singular => Truth::Boundary,
        }
    }
}

/// Scan result. Cells are stored row-major with `y` as the row index and
/// `x` as the column index: cell `(i, j)` is at `j * width + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionGrid {
    pub spec: GridSpec,
    /// First certifying stage, [`NOT_CERTIFIED`] or [`INVALID`].
    pub stage_of_cell: Vec<i32>,
    pub truth_of_cell: Vec<Truth>,
    /// Exact locus membership for degree 2 and 3 mappings.
    pub locus_of_cell: Vec<Option<bool>>,
}

struct Cell {
    stage: i32,
    truth: Truth,
    locus: Option<bool>,
}

fn evaluate_cell(spec: &GridSpec, cfg: &AlgoConfig, x: &Rational, y: &Rational) -> Cell {
    let Some(exact) = spec.mapping.polynomial(x, y) else {
        return Cell {
            stage: INVALID,
            truth: Truth::Invalid,
            locus: None,
        };
    };
    let cert_stage = match spec.backend {
        Backend::Exact => certified_stage(&exact, cfg),
        Backend::Float => {
            let (xf, yf) = (Coeff::to_f64(x), Coeff::to_f64(y));
            match spec.mapping.polynomial(&xf, &yf) {
                Some(p) => certified_stage(&p, cfg),
                None => INVALID,
            }
        }
    };
    Cell {
        stage: cert_stage,
        truth: jury_verdict(&exact).into(),
        locus: spec.mapping.locus(&exact),
    }
}

fn certified_stage<T: Coeff>(p: &MonicPolynomial<T>, cfg: &AlgoConfig) -> i32 {
    let cert = run_algorithm(p, cfg);
    match (cert.verdict, cert.deciding_stage) {
        (crate::engine::Verdict::Certified, Some(s)) => s as i32,
        _ => NOT_CERTIFIED,
    }
}

/// Scans every node. Cells are evaluated in parallel on the current rayon
/// pool; the output order depends only on the indices.
pub fn scan_region(spec: &GridSpec) -> RegionGrid {
    let cfg = AlgoConfig::with_max_stages(spec.max_stages);
    let xs = spec.x_axis.nodes();
    let ys = spec.y_axis.nodes();
    let width = xs.len();
    let cells: Vec<Cell> = (0..width * ys.len())
        .into_par_iter()
        .map(|idx| evaluate_cell(spec, &cfg, &xs[idx % width], &ys[idx / width]))
        .collect();
    let mut grid = RegionGrid {
        spec: spec.clone(),
        stage_of_cell: Vec::with_capacity(cells.len()),
        truth_of_cell: Vec::with_capacity(cells.len()),
        locus_of_cell: Vec::with_capacity(cells.len()),
    };
    for c in cells {
        grid.stage_of_cell.push(c.stage);
        grid.truth_of_cell.push(c.truth);
        grid.locus_of_cell.push(c.locus);
    }
    grid
}

/// Same as [`scan_region`] on a dedicated pool of `workers` threads.
pub fn scan_region_with_workers(spec: &GridSpec, workers: usize) -> Result<RegionGrid> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(|| scan_region(spec)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisSummary {
    pub name: String,
    pub min: String,
    pub max: String,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSummary {
    pub mapping: String,
    pub param: Option<String>,
    pub backend: Backend,
    pub max_stages: usize,
    pub x_axis: AxisSummary,
    pub y_axis: AxisSummary,
    pub cells: usize,
    pub invalid: usize,
    pub not_certified: usize,
    pub certified: usize,
    /// Cells first certified at each stage.
    pub stage_counts: BTreeMap<usize, usize>,
    pub truth_counts: BTreeMap<String, usize>,
    /// Certified cells whose ground truth is not stable.
    pub soundness_violations: usize,
    /// Fraction of truly stable cells that are certified.
    pub coverage: f64,
    pub locus_checked: usize,
    pub locus_agreement: usize,
}

impl RegionGrid {
    pub fn width(&self) -> usize {
        self.spec.width()
    }

    pub fn height(&self) -> usize {
        self.spec.height()
    }

    pub fn stage_at(&self, i: usize, j: usize) -> i32 {
        self.stage_of_cell[j * self.width() + i]
    }

    pub fn truth_at(&self, i: usize, j: usize) -> Truth {
        self.truth_of_cell[j * self.width() + i]
    }

    pub fn certified_count(&self) -> usize {
        self.stage_of_cell.iter().filter(|&&s| s >= 0).count()
    }

    pub fn soundness_violations(&self) -> usize {
        self.stage_of_cell
            .iter()
            .zip(&self.truth_of_cell)
            .filter(|(&s, &t)| s >= 0 && t != Truth::Stable)
            .count()
    }

    pub fn summary(&self) -> RegionSummary {
        let axis = |a: &Axis| AxisSummary {
            name: a.name.clone(),
            min: a.min.to_string(),
            max: a.max.to_string(),
            steps: a.steps,
        };
        let mut stage_counts = BTreeMap::new();
        for &s in &self.stage_of_cell {
            if s >= 0 {
                *stage_counts.entry(s as usize).or_insert(0) += 1;
            }
        }
        let mut truth_counts = BTreeMap::new();
        for t in &self.truth_of_cell {
            *truth_counts.entry(t.name().to_string()).or_insert(0) += 1;
        }
        let stable = self.truth_of_cell.iter().filter(|&&t| t == Truth::Stable).count();
        let certified_stable = self
            .stage_of_cell
            .iter()
            .zip(&self.truth_of_cell)
            .filter(|(&s, &t)| s >= 0 && t == Truth::Stable)
            .count();
        let (mut locus_checked, mut locus_agreement) = (0, 0);
        for (l, t) in self.locus_of_cell.iter().zip(&self.truth_of_cell) {
            if let Some(member) = l {
                locus_checked += 1;
                if *member == (*t == Truth::Stable) {
                    locus_agreement += 1;
                }
            }
        }
        RegionSummary {
            mapping: self.spec.mapping.name().to_string(),
            param: self.spec.mapping.param().map(|p| p.to_string()),
            backend: self.spec.backend,
            max_stages: self.spec.max_stages,
            x_axis: axis(&self.spec.x_axis),
            y_axis: axis(&self.spec.y_axis),
            cells: self.stage_of_cell.len(),
            invalid: self.stage_of_cell.iter().filter(|&&s| s == INVALID).count(),
            not_certified: self.stage_of_cell.iter().filter(|&&s| s == NOT_CERTIFIED).count(),
            certified: self.certified_count(),
            stage_counts,
            truth_counts,
            soundness_violations: self.soundness_violations(),
            coverage: if stable == 0 {
                0.0
            } else {
                certified_stable as f64 / stable as f64
            },
            locus_checked,
            locus_agreement,
        }
    }

    pub fn to_json_summary(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("summary serializes")
    }

    /// `x,y,stage,truth`, one line per node; `y` outer, `x` inner, both
    /// ascending. Coordinates are exact fractions.
    pub fn to_csv(&self) -> String {
        let xs: Vec<String> = self.spec.x_axis.nodes().iter().map(|v| v.to_string()).collect();
        let ys: Vec<String> = self.spec.y_axis.nodes().iter().map(|v| v.to_string()).collect();
        let mut out = String::with_capacity(self.stage_of_cell.len() * 24);
        out.push_str("x,y,stage,truth\n");
        for (j, y) in ys.iter().enumerate() {
            for (i, x) in xs.iter().enumerate() {
                let idx = j * xs.len() + i;
                out.push_str(&format!(
                    "{x},{y},{},{}\n",
                    self.stage_of_cell[idx],
                    self.truth_of_cell[idx].name()
                ));
            }
        }
        out
    }

    /// Stage palette byte: 0 invalid, 40 not certified, and
    /// `255 - 12 * min(stage, 15)` for a cell first certified at `stage`.
    pub fn stage_byte(stage: i32) -> u8 {
        match stage {
            INVALID => 0,
            s if s < 0 => 40,
            s => 255 - 12 * (s.min(15) as u8),
        }
    }

    /// Truth palette byte: stable 200, boundary 100, unstable and invalid 0.
    pub fn truth_byte(truth: Truth) -> u8 {
        match truth {
            Truth::Stable => 200,
            Truth::Boundary => 100,
            Truth::Unstable | Truth::Invalid => 0,
        }
    }

    /// A cell lies on the ground-truth boundary when it is itself singular
    /// or a 4-neighbour has a different stable/not-stable status.
    pub fn on_truth_boundary(&self, i: usize, j: usize) -> bool {
        let t = self.truth_at(i, j);
        if t == Truth::Boundary {
            return true;
        }
        let stable = t == Truth::Stable;
        let (w, h) = (self.width(), self.height());
        let mut neighbours = Vec::with_capacity(4);
        if i > 0 {
            neighbours.push((i - 1, j));
        }
        if i + 1 < w {
            neighbours.push((i + 1, j));
        }
        if j > 0 {
            neighbours.push((i, j - 1));
        }
        if j + 1 < h {
            neighbours.push((i, j + 1));
        }
        neighbours
            .into_iter()
            .any(|(a, b)| (self.truth_at(a, b) == Truth::Stable) != stable)
    }

    /// Binary greymap of stage bytes. Image rows run from the largest `y`
    /// down so the picture has the usual orientation.
    pub fn to_pgm(&self) -> Vec<u8> {
        let (w, h) = (self.width(), self.height());
        let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
        for j in (0..h).rev() {
            out.extend((0..w).map(|i| Self::stage_byte(self.stage_at(i, j))));
        }
        out
    }

    /// Binary pixmap: red is the stage byte, green the truth byte, blue 255
    /// on the ground-truth boundary.
    pub fn to_ppm(&self) -> Vec<u8> {
        let (w, h) = (self.width(), self.height());
        let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
        for j in (0..h).rev() {
            for i in 0..w {
                out.push(Self::stage_byte(self.stage_at(i, j)));
                out.push(Self::truth_byte(self.truth_at(i, j)));
                out.push(if self.on_truth_boundary(i, j) { 255 } else { 0 });
            }
        }
        out
    }
}
