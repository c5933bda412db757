//! Python bindings. The module is importable as `jacobi_envelope`.

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use jacobi_envelope as core;
use jacobi_envelope::extrema::{inclusion_chain_holds, localization_windows};
use jacobi_envelope::lemmas::{certify_random, DEFAULT_CORNER_BIAS};
use jacobi_envelope::osc::{eval_w, osc_window};
use jacobi_envelope::verifier::{
    baseline_bound, conjecture_metrics, run_check, sonin_analysis, theorem1_bound, theorem2_bound,
};
use jacobi_envelope::{Check, Error, JacobiParams, ReportItem};

create_exception!(jacobi_envelope, DomainError, PyValueError);

const DEFAULT_SAMPLES: usize = 4000;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Invalid(_) | Error::EmptyInterval { .. } => DomainError::new_err(e.to_string()),
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

/// Degree and parameters of `P_k^{(α,β)}`.
#[pyclass(name = "Params", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyParams {
    inner: JacobiParams,
}

#[pymethods]
impl PyParams {
    #[new]
    fn new(k: u32, alpha: f64, beta: f64) -> PyResult<Self> {
        Ok(Self { inner: JacobiParams::new(k, alpha, beta).map_err(to_py)? })
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }

    fn in_theorem1_domain(&self) -> bool {
        self.inner.in_theorem1_domain()
    }

    fn in_theorem2_domain(&self) -> bool {
        self.inner.in_theorem2_domain()
    }

    #[pyo3(signature = (x, what = "poly"))]
    fn eval(&self, x: f64, what: &str) -> PyResult<f64> {
        eval_what(&self.inner, x, what)
    }

    fn __repr__(&self) -> String {
        format!("Params(k={}, alpha={}, beta={})", self.inner.k, self.inner.alpha, self.inner.beta)
    }
}

/// One row of a verification report.
#[pyclass(name = "Item", frozen, get_all)]
struct PyItem {
    check: String,
    k: u32,
    alpha: f64,
    beta: f64,
    lhs: f64,
    rhs: f64,
    margin: f64,
    passed: bool,
    skipped: bool,
    witness_x: Option<f64>,
    note: Option<String>,
}

#[pymethods]
impl PyItem {
    fn __repr__(&self) -> String {
        format!(
            "Item(check={:?}, k={}, alpha={}, beta={}, lhs={}, rhs={}, passed={})",
            self.check, self.k, self.alpha, self.beta, self.lhs, self.rhs, self.passed
        )
    }
}

impl From<ReportItem> for PyItem {
    fn from(i: ReportItem) -> Self {
        Self {
            check: i.check,
            k: i.params.k,
            alpha: i.params.alpha,
            beta: i.params.beta,
            lhs: i.lhs,
            rhs: i.rhs,
            margin: i.margin,
            passed: i.pass,
            skipped: i.skipped,
            witness_x: i.witness_x,
            note: i.note,
        }
    }
}

fn eval_what(p: &JacobiParams, x: f64, what: &str) -> PyResult<f64> {
    let v = match what {
        "poly" => core::eval_jacobi(p, x).map(|r| r.value.to_f64()),
        "ortho" => core::eval_orthonormal(p, x).map(|r| r.value.to_f64()),
        "M" => core::eval_m(p, x),
        "Z" => core::eval_z(p, x),
        "W" => eval_w(p, x).map(|w| w.raw),
        "S" => core::sonin_s(p, x),
        other => return Err(PyValueError::new_err(format!("unknown quantity `{other}`; expected poly|ortho|M|Z|W|S"))),
    };
    v.map_err(to_py)
}

fn params(k: u32, alpha: f64, beta: f64) -> PyResult<JacobiParams> {
    JacobiParams::new(k, alpha, beta).map_err(to_py)
}

/// Evaluates `poly`, `ortho`, `M`, `Z`, `W` or `S` at `x`.
#[pyfunction]
#[pyo3(signature = (k, alpha, beta, x, what = "poly"))]
fn eval(k: u32, alpha: f64, beta: f64, x: f64, what: &str) -> PyResult<f64> {
    eval_what(&params(k, alpha, beta)?, x, what)
}

/// δ±1, γ±1, N±1, N′±1, x₀ and θ as a dict.
#[pyfunction]
fn window<'py>(py: Python<'py>, k: u32, alpha: f64, beta: f64) -> PyResult<Bound<'py, PyDict>> {
    let p = params(k, alpha, beta)?;
    if !p.in_theorem1_domain() {
        return Err(DomainError::new_err(Check::Theorem1.hypothesis()));
    }
    let dp = core::derive_params(&p);
    let delta = core::delta_interval(&dp).map_err(to_py)?;
    let gamma = osc_window(&dp).map_err(to_py)?;
    let w = localization_windows(&dp).map_err(to_py)?;
    let x0 = core::find_x0(&dp).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("delta_minus", delta.lo)?;
    d.set_item("delta_plus", delta.hi)?;
    d.set_item("gamma_minus", gamma.gamma_minus)?;
    d.set_item("gamma_plus", gamma.gamma_plus)?;
    d.set_item("n_minus", w.n.lo)?;
    d.set_item("n_plus", w.n.hi)?;
    d.set_item("n_prime_minus", w.n_prime.lo)?;
    d.set_item("n_prime_plus", w.n_prime.hi)?;
    d.set_item("x0", x0.x0)?;
    d.set_item("theta", x0.theta)?;
    d.set_item("inclusion_chain", inclusion_chain_holds(&dp, &w).map_err(to_py)?)?;
    Ok(d)
}

/// Runs one named check at a single parameter point.
#[pyfunction]
#[pyo3(signature = (check, k, alpha, beta, samples = DEFAULT_SAMPLES))]
fn verify(check: &str, k: u32, alpha: f64, beta: f64, samples: usize) -> PyResult<Vec<PyItem>> {
    let check: Check = check.parse().map_err(to_py)?;
    let p = params(k, alpha, beta)?;
    if !check.applies_to(&p) {
        return Err(DomainError::new_err(check.hypothesis()));
    }
    Ok(run_check(check, &p, samples).into_iter().map(PyItem::from).collect())
}

#[pyfunction]
#[pyo3(signature = (k, alpha, beta, samples = DEFAULT_SAMPLES))]
fn sonin<'py>(py: Python<'py>, k: u32, alpha: f64, beta: f64, samples: usize) -> PyResult<Bound<'py, PyDict>> {
    let r = sonin_analysis(&params(k, alpha, beta)?, samples).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("x0", r.x0)?;
    d.set_item("theta", r.theta)?;
    d.set_item("s_at_x0", r.s_at_x0)?;
    d.set_item("max_abs_z", r.max_abs_z())?;
    d.set_item("bracket", (r.bracket_lo, r.bracket_hi))?;
    d.set_item("fd_mismatches", r.fd_mismatches)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (trials, seed, corner_bias = DEFAULT_CORNER_BIAS))]
fn certify_lemmas<'py>(py: Python<'py>, trials: u64, seed: u64, corner_bias: f64) -> PyResult<Bound<'py, PyDict>> {
    let s = py.detach(|| certify_random(trials, seed, corner_bias)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("trials", s.trials)?;
    d.set_item("passed", s.passed)?;
    d.set_item("failed", s.failed)?;
    d.set_item("corner_trials", s.corner_trials)?;
    d.set_item("certification", s.certification)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (k, alpha, beta, samples = DEFAULT_SAMPLES))]
fn conjecture<'py>(py: Python<'py>, k: u32, alpha: f64, beta: f64, samples: usize) -> PyResult<Bound<'py, PyDict>> {
    let m = conjecture_metrics(&params(k, alpha, beta)?, samples).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("plateau_ratio", m.plateau_ratio)?;
    d.set_item("mass", m.mass)?;
    Ok(d)
}

#[pyfunction]
fn bounds<'py>(py: Python<'py>, k: u32, alpha: f64, beta: f64) -> PyResult<Bound<'py, PyDict>> {
    let p = params(k, alpha, beta)?;
    let d = PyDict::new(py);
    d.set_item("theorem1", theorem1_bound())?;
    d.set_item("theorem2", theorem2_bound(&p))?;
    d.set_item("baseline", baseline_bound(&p))?;
    Ok(d)
}

#[pymodule(name = "jacobi_envelope")]
fn init_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyItem>()?;
    m.add("DomainError", m.py().get_type::<DomainError>())?;
    m.add_function(wrap_pyfunction!(eval, m)?)?;
    m.add_function(wrap_pyfunction!(window, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(sonin, m)?)?;
    m.add_function(wrap_pyfunction!(certify_lemmas, m)?)?;
    m.add_function(wrap_pyfunction!(conjecture, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    Ok(())
}
