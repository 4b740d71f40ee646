//! Python bindings: `import pybinewton`.

use binewton::analysis;
use binewton::stepper::{self, DEFAULT_WINDOW};
use binewton::tables::{self, TableId, TableRows, Tolerances};
use binewton::{Branch, IterationTrace, NumericError, SolverConfig};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pybinewton, NumericFailure, PyValueError, "A numerical operation was undefined or failed.");

fn numeric(e: NumericError) -> PyErr {
    NumericFailure::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Polynomial", module = "pybinewton", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPolynomial {
    inner: binewton::Polynomial,
}

#[pymethods]
impl PyPolynomial {
    /// Coefficients, highest degree first.
    #[new]
    fn new(coeffs: Vec<f64>) -> Self {
        PyPolynomial { inner: binewton::Polynomial::new(coeffs) }
    }

    /// Parses `"1,-3,2"`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(|inner| PyPolynomial { inner }).map_err(|e: binewton::funcmodel::ParsePolynomialError| {
            PyValueError::new_err(e.to_string())
        })
    }

    #[staticmethod]
    fn from_roots(roots: Vec<f64>) -> Self {
        PyPolynomial { inner: binewton::Polynomial::from_roots(&roots) }
    }

    #[getter]
    fn coeffs(&self) -> Vec<f64> {
        self.inner.coeffs().to_vec()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn eval(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    fn derivative(&self) -> Self {
        PyPolynomial { inner: self.inner.derivative() }
    }

    /// `(f, f', f'')` at `x`; raises on non-finite values.
    fn eval012(&self, x: f64) -> PyResult<(f64, f64, f64)> {
        binewton::funcmodel::eval012(&self.inner, x).map_err(numeric)
    }

    fn __call__(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    fn __repr__(&self) -> String {
        format!("Polynomial('{}')", self.inner)
    }
}

#[pyclass(name = "MethodSpec", module = "pybinewton", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyMethodSpec {
    inner: binewton::MethodSpec,
}

fn parse_branch(branch: &str) -> PyResult<Branch> {
    match branch {
        "signed-odd" => Ok(Branch::SignedOdd),
        "principal" => Ok(Branch::Principal),
        other => Err(PyValueError::new_err(format!("unknown branch {other:?}"))),
    }
}

#[pymethods]
impl PyMethodSpec {
    /// Exponent `q` and truncation depth `m` (the number of terms is `m + 1`).
    #[new]
    #[pyo3(signature = (q, m, branch = "signed-odd"))]
    fn new(q: f64, m: u32, branch: &str) -> PyResult<Self> {
        let inner = binewton::MethodSpec::new(q, m, parse_branch(branch)?).map_err(numeric)?;
        Ok(PyMethodSpec { inner })
    }

    #[staticmethod]
    fn from_terms(q: f64, terms: u32) -> PyResult<Self> {
        binewton::MethodSpec::from_terms(q, terms).map(|inner| PyMethodSpec { inner }).map_err(numeric)
    }

    #[staticmethod]
    fn newton() -> Self {
        PyMethodSpec { inner: binewton::MethodSpec::newton() }
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.q()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m()
    }

    #[getter]
    fn terms(&self) -> u32 {
        self.inner.terms()
    }

    fn __repr__(&self) -> String {
        format!("MethodSpec(q={}, m={})", self.inner.q(), self.inner.m())
    }
}

#[pyclass(name = "Trace", module = "pybinewton", frozen)]
struct PyTrace {
    inner: IterationTrace,
}

#[pymethods]
impl PyTrace {
    #[getter]
    fn status(&self) -> &'static str {
        self.inner.status.as_str()
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations
    }

    #[getter]
    fn solution(&self) -> f64 {
        self.inner.solution()
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.is_converged()
    }

    #[getter]
    fn message(&self) -> Option<String> {
        self.inner.message.clone()
    }

    /// `(k, x, f(x), error)` per iterate; `error` is `None` without a reference root.
    #[getter]
    fn points(&self) -> Vec<(usize, f64, f64, Option<f64>)> {
        self.inner.points.iter().map(|p| (p.k, p.x, p.fx, p.err)).collect()
    }

    fn errors(&self, root: f64) -> Vec<f64> {
        self.inner.errors(root)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        IterationTrace::from_json(text).map(|inner| PyTrace { inner }).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __len__(&self) -> usize {
        self.inner.points.len()
    }

    fn __repr__(&self) -> String {
        format!("Trace(status='{}', iterations={}, solution={})", self.inner.status, self.inner.iterations, self.inner.solution())
    }
}

#[pyfunction]
fn newton_step(poly: &PyPolynomial, x: f64) -> PyResult<f64> {
    stepper::newton_step(&poly.inner, x).map_err(numeric)
}

#[pyfunction]
fn binomial_newton_step(poly: &PyPolynomial, x: f64, spec: &PyMethodSpec) -> PyResult<f64> {
    stepper::binomial_newton_step(&poly.inner, x, &spec.inner).map_err(numeric)
}

/// Iterates from `x0`. Failures are reported through the trace status.
#[pyfunction]
#[pyo3(signature = (poly, spec, x0, root = None, step_tol = 1e-14, resid_tol = 1e-15, max_iter = 100))]
fn solve(
    poly: &PyPolynomial,
    spec: &PyMethodSpec,
    x0: f64,
    root: Option<f64>,
    step_tol: f64,
    resid_tol: f64,
    max_iter: usize,
) -> PyResult<PyTrace> {
    let cfg = SolverConfig { step_tol, resid_tol, max_iter };
    cfg.validate().map_err(numeric)?;
    Ok(PyTrace { inner: stepper::run_solver(&poly.inner, &spec.inner, x0, &cfg, root) })
}

#[pyfunction]
#[pyo3(signature = (trace, root, window = DEFAULT_WINDOW))]
fn estimate_order(trace: &PyTrace, root: f64, window: usize) -> PyResult<f64> {
    stepper::estimate_order_with(&trace.inner, root, window).map_err(numeric)
}

#[pyfunction]
#[pyo3(signature = (trace, root, order, window = DEFAULT_WINDOW))]
fn estimate_ratio(trace: &PyTrace, root: f64, order: f64, window: usize) -> PyResult<f64> {
    stepper::estimate_ratio_with(&trace.inner, root, order, window).map_err(numeric)
}

#[pyfunction]
fn g_prime(poly: &PyPolynomial, x: f64, q: f64) -> PyResult<f64> {
    analysis::g_prime(&poly.inner, x, q).map_err(numeric)
}

#[pyfunction]
fn g_second(poly: &PyPolynomial, x: f64, q: f64) -> PyResult<f64> {
    analysis::g_second(&poly.inner, x, q).map_err(numeric)
}

#[pyfunction]
fn curvature_f(poly: &PyPolynomial, x: f64) -> PyResult<f64> {
    analysis::curvature_f(&poly.inner, x).map_err(numeric)
}

#[pyfunction]
fn curvature_g(poly: &PyPolynomial, x: f64, q: f64) -> PyResult<f64> {
    analysis::curvature_g(&poly.inner, x, q).map_err(numeric)
}

#[pyfunction]
fn newton_constant(poly: &PyPolynomial, alpha: f64) -> PyResult<f64> {
    analysis::newton_constant(&poly.inner, alpha).map_err(numeric)
}

#[pyfunction]
fn binomial_constant(poly: &PyPolynomial, alpha: f64, q: f64) -> PyResult<f64> {
    analysis::binomial_constant(&poly.inner, alpha, q).map_err(numeric)
}

#[pyfunction]
fn admissible_q_interval(poly: &PyPolynomial, alpha: f64) -> PyResult<(f64, f64)> {
    analysis::admissible_q_interval(&poly.inner, alpha).map_err(numeric)
}

/// The comparison report as a dict with the same keys as its JSON form.
#[pyfunction]
fn comparison_report<'py>(py: Python<'py>, poly: &PyPolynomial, alpha: f64, q: f64) -> PyResult<Bound<'py, PyAny>> {
    let report = analysis::comparison_report(&poly.inner, alpha, q).map_err(numeric)?;
    json_to_py(py, &report.to_json())
}

/// Recomputes a built-in table (`"5.1.1"` ... `"5.2.2"`) and diffs it against the fixture.
#[pyfunction]
fn run_table<'py>(py: Python<'py>, table: &str) -> PyResult<Bound<'py, PyDict>> {
    let id: TableId = table.parse().map_err(PyValueError::new_err)?;
    let run = tables::run_builtin(id, &SolverConfig::default(), &Tolerances::default());
    let rows = match &run.rows {
        TableRows::Convergence(r) => serde_json::to_string(r),
        TableRows::Curvature(r) => serde_json::to_string(r),
    }
    .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let out = PyDict::new(py);
    out.set_item("table", id.as_str())?;
    out.set_item("rows", json_to_py(py, &rows)?)?;
    out.set_item("passed", run.diff.is_pass())?;
    out.set_item("rows_checked", run.diff.rows_checked)?;
    out.set_item("rows_passed", run.diff.rows_passed)?;
    out.set_item("summary", run.diff.summary())?;
    out.set_item("failures", run.diff.render_failures())?;
    Ok(out)
}

#[pymodule]
fn pybinewton(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyMethodSpec>()?;
    m.add_class::<PyTrace>()?;
    m.add("NumericFailure", m.py().get_type::<NumericFailure>())?;
    m.add_function(wrap_pyfunction!(newton_step, m)?)?;
    m.add_function(wrap_pyfunction!(binomial_newton_step, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_order, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(g_prime, m)?)?;
    m.add_function(wrap_pyfunction!(g_second, m)?)?;
    m.add_function(wrap_pyfunction!(curvature_f, m)?)?;
    m.add_function(wrap_pyfunction!(curvature_g, m)?)?;
    m.add_function(wrap_pyfunction!(newton_constant, m)?)?;
    m.add_function(wrap_pyfunction!(binomial_constant, m)?)?;
    m.add_function(wrap_pyfunction!(admissible_q_interval, m)?)?;
    m.add_function(wrap_pyfunction!(comparison_report, m)?)?;
    m.add_function(wrap_pyfunction!(run_table, m)?)?;
    Ok(())
}
