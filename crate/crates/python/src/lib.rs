//! Python bindings for `l1stab`.
//!
//! Coefficients may be given as `int`, `float`, `fractions.Fraction` or
//! strings such as `"-3/4"`; they are read through `str()`. Structured
//! results come back as plain dicts and lists.

use l1stab::cases::{
    cournot_verify, ricker_condition_i, ricker_condition_ii, ricker_verdict, CournotParams, RickerParams,
};
use l1stab::region::{c2_membership, c3_membership, scan_region, Axis, GridSpec, Mapping};
use l1stab::roots::{find_roots_with, is_schur_numeric, RootConfig};
use l1stab::{
    jury_table, run_algorithm, AlgoConfig, AnyMonic, Backend, CertificateJson, Coeff, MonicPolynomial, Scalar,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

fn err(e: l1stab::Error) -> PyErr {
    match e {
        l1stab::Error::NoConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn backend(name: &str) -> PyResult<Backend> {
    name.parse().map_err(err)
}

fn literals(values: &[Bound<'_, PyAny>]) -> PyResult<Vec<String>> {
    values.iter().map(|v| Ok(v.str()?.to_cow()?.into_owned())).collect()
}

fn scalar(v: &Bound<'_, PyAny>, b: Backend) -> PyResult<Scalar> {
    Scalar::parse(&v.str()?.to_cow()?, b).map_err(err)
}

fn from_json<'py>(py: Python<'py>, s: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (s,))
}

fn to_py<'py, S: serde::Serialize>(py: Python<'py>, v: &S) -> PyResult<Bound<'py, PyAny>> {
    from_json(
        py,
        &serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?,
    )
}

/// A real monic polynomial. Coefficients are highest degree first and are
/// normalized by the leading one.
#[pyclass(name = "Polynomial", frozen)]
struct PyPolynomial {
    inner: AnyMonic,
}

#[pymethods]
impl PyPolynomial {
    #[new]
    #[pyo3(signature = (coeffs, backend = "exact"))]
    fn new(coeffs: Vec<Bound<'_, PyAny>>, backend: &str) -> PyResult<Self> {
        let b = self::backend(backend)?;
        let inner = AnyMonic::parse_descending(&literals(&coeffs)?, b).map_err(err)?;
        Ok(PyPolynomial { inner })
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn backend(&self) -> &'static str {
        self.inner.backend().name()
    }

    /// Runs the staged test and returns the certificate as a dict.
    #[pyo3(signature = (max_stages = 64))]
    fn check<'py>(&self, py: Python<'py>, max_stages: usize) -> PyResult<Bound<'py, PyAny>> {
        let cert = l1stab::engine::check_any(&self.inner, &AlgoConfig::with_max_stages(max_stages));
        from_json(py, &cert.to_json())
    }

    /// One dict per stage: `stage`, `polynomial`, `tail_sum`.
    #[pyo3(signature = (max_stages = 64))]
    fn trace<'py>(&self, py: Python<'py>, max_stages: usize) -> PyResult<Bound<'py, PyAny>> {
        let cfg = AlgoConfig::with_max_stages(max_stages);
        let rows = match &self.inner {
            AnyMonic::Exact(p) => trace_rows(p, &cfg),
            AnyMonic::Float(p) => trace_rows(p, &cfg),
        };
        to_py(py, &rows)
    }

    /// Jury table rows (as strings) and the verdict.
    fn jury<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let value = match &self.inner {
            AnyMonic::Exact(p) => jury_value(p),
            AnyMonic::Float(p) => jury_value(p),
        };
        to_py(py, &value)
    }

    /// Numerical roots as `complex` values.
    #[pyo3(signature = (seed = 0))]
    fn roots(&self, seed: u64) -> PyResult<Vec<num_complex::Complex64>> {
        let cfg = RootConfig {
            seed,
            ..RootConfig::default()
        };
        Ok(find_roots_with(&self.inner.to_f64(), &cfg).map_err(err)?.roots)
    }

    /// `"inside"`, `"outside"` or `"near_circle"`.
    #[pyo3(signature = (margin = l1stab::roots::DEFAULT_MARGIN))]
    fn schur_numeric<'py>(&self, py: Python<'py>, margin: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &is_schur_numeric(&self.inner.to_f64(), margin).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "Polynomial('{}', backend='{}')",
            self.inner,
            self.inner.backend().name()
        )
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[derive(serde::Serialize)]
struct TraceRow {
    stage: usize,
    polynomial: String,
    tail_sum: String,
}

fn trace_rows<T: Coeff>(p: &MonicPolynomial<T>, cfg: &AlgoConfig) -> Vec<TraceRow> {
    run_algorithm(p, cfg)
        .trace
        .iter()
        .map(|t| TraceRow {
            stage: t.stage,
            polynomial: t.polynomial_string(),
            tail_sum: t.tail_sum.render(),
        })
        .collect()
}

fn jury_value<T: Coeff>(p: &MonicPolynomial<T>) -> serde_json::Value {
    let table = jury_table(p);
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| r.iter().map(Coeff::render).collect())
        .collect();
    serde_json::json!({ "rows": rows, "verdict": table.verdict })
}

/// Checks a certificate dict (or JSON string) against a fresh run.
#[pyfunction]
#[pyo3(signature = (certificate, max_stages = 64))]
fn revalidate(py: Python<'_>, certificate: &Bound<'_, PyAny>, max_stages: usize) -> PyResult<bool> {
    let text: String = match certificate.extract::<String>() {
        Ok(s) => s,
        Err(_) => py.import("json")?.call_method1("dumps", (certificate,))?.extract()?,
    };
    let cert = CertificateJson::from_json(&text).map_err(err)?;
    Ok(cert.revalidate(&AlgoConfig::with_max_stages(max_stages)).is_ok())
}

/// Closed-form degree-2 stability test for `x^2 + a1 x + a0`.
#[pyfunction]
#[pyo3(signature = (a0, a1, backend = "exact"))]
fn c2(a0: &Bound<'_, PyAny>, a1: &Bound<'_, PyAny>, backend: &str) -> PyResult<bool> {
    let b = self::backend(backend)?;
    c2_membership(&scalar(a0, b)?, &scalar(a1, b)?).map_err(err)
}

/// Closed-form degree-3 stability test for `x^3 + a2 x^2 + a1 x + a0`.
#[pyfunction]
#[pyo3(signature = (a0, a1, a2, backend = "exact"))]
fn c3(a0: &Bound<'_, PyAny>, a1: &Bound<'_, PyAny>, a2: &Bound<'_, PyAny>, backend: &str) -> PyResult<bool> {
    let b = self::backend(backend)?;
    c3_membership(&scalar(a0, b)?, &scalar(a1, b)?, &scalar(a2, b)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (lam, k, competitors = 3, max_stages = 64))]
fn cournot<'py>(
    py: Python<'py>,
    lam: &Bound<'py, PyAny>,
    k: usize,
    competitors: usize,
    max_stages: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let lambda = l1stab::scalar::parse_rational(&lam.str()?.to_cow()?).map_err(err)?;
    let params = CournotParams::new(lambda, k, competitors).map_err(err)?;
    let report = cournot_verify(&params, &AlgoConfig::with_max_stages(max_stages)).map_err(err)?;
    from_json(py, &report.to_json())
}

#[pyfunction]
#[pyo3(signature = (r, a, b, max_stages = 3))]
fn ricker<'py>(
    py: Python<'py>,
    r: &Bound<'py, PyAny>,
    a: &Bound<'py, PyAny>,
    b: &Bound<'py, PyAny>,
    max_stages: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let parse = |v: &Bound<'py, PyAny>| -> PyResult<l1stab::Rational> {
        l1stab::scalar::parse_rational(&v.str()?.to_cow()?).map_err(err)
    };
    let (r, a, b) = (parse(r)?, parse(a)?, parse(b)?);
    let params = RickerParams::new(r.clone(), a.clone(), b.clone()).map_err(err)?;
    let verdict = ricker_verdict(&params, &AlgoConfig::with_max_stages(max_stages)).map_err(err)?;
    let value = serde_json::json!({
        "verdict": verdict,
        "condition_i": ricker_condition_i(&r, &a, &b),
        "condition_ii": ricker_condition_ii(&r, &a, &b),
    });
    to_py(py, &value)
}

/// Scans a parameter grid. `format` is `"summary"` (dict), `"csv"` (str),
/// `"pgm"` or `"ppm"` (bytes).
#[pyfunction]
#[pyo3(signature = (mapping, param = None, backend = "exact", stages = 3, x_steps = None, y_steps = None, format = "summary"))]
#[allow(clippy::too_many_arguments)]
fn scan<'py>(
    py: Python<'py>,
    mapping: &str,
    param: Option<&Bound<'py, PyAny>>,
    backend: &str,
    stages: usize,
    x_steps: Option<usize>,
    y_steps: Option<usize>,
    format: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let param = param
        .map(|p| l1stab::scalar::parse_rational(&p.str()?.to_cow()?).map_err(err))
        .transpose()?;
    let mapping = Mapping::from_name(mapping, param).map_err(err)?;
    let mut spec = GridSpec::new(mapping, self::backend(backend)?, stages);
    let resize = |a: &Axis, steps: Option<usize>| {
        Axis::new(a.name.clone(), a.min.clone(), a.max.clone(), steps.unwrap_or(a.steps))
    };
    spec.x_axis = resize(&spec.x_axis, x_steps).map_err(err)?;
    spec.y_axis = resize(&spec.y_axis, y_steps).map_err(err)?;
    let grid = py.detach(|| scan_region(&spec));
    match format {
        "summary" => from_json(py, &grid.to_json_summary()),
        "csv" => Ok(grid.to_csv().into_pyobject(py)?.into_any()),
        "pgm" => Ok(PyBytes::new(py, &grid.to_pgm()).into_any()),
        "ppm" => Ok(PyBytes::new(py, &grid.to_ppm()).into_any()),
        other => Err(PyValueError::new_err(format!("unknown format {other:?}"))),
    }
}

#[pymodule]
fn pyl1stab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_function(wrap_pyfunction!(revalidate, m)?)?;
    m.add_function(wrap_pyfunction!(c2, m)?)?;
    m.add_function(wrap_pyfunction!(c3, m)?)?;
    m.add_function(wrap_pyfunction!(cournot, m)?)?;
    m.add_function(wrap_pyfunction!(ricker, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    Ok(())
}
