//! Python module `betainv`.
//!
//! Invalid arguments raise `ValueError`; a solver, quadrature or series that
//! fails to reach its tolerance raises `betainv.ConvergenceError`.

use betainv::gammafns::{self, GammaQuantileQuery};
use betainv::qframework::FrameworkInstance;
use betainv::series;
use betainv::verify::{run as run_suite, Suite};
use betainv::{quantile as solve, sweep as sweeps};
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

create_exception!(betainv, ConvergenceError, PyArithmeticError);

fn err(e: betainv::Error) -> PyErr {
    if e.is_convergence() {
        ConvergenceError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// Numeric tolerances; every field can be read and assigned.
#[pyclass(name = "ToleranceConfig", get_all, set_all, from_py_object)]
#[derive(Clone)]
struct PyTolerance {
    quantile_abs_tol: f64,
    max_newton_iters: usize,
    fd_rel_step: f64,
    series_tail_tol: f64,
    series_max_terms: usize,
    series_direct_terms: usize,
    quad_abs_tol: f64,
    quad_rel_tol: f64,
}

impl From<betainv::ToleranceConfig> for PyTolerance {
    fn from(t: betainv::ToleranceConfig) -> Self {
        PyTolerance {
            quantile_abs_tol: t.quantile_abs_tol,
            max_newton_iters: t.max_newton_iters,
            fd_rel_step: t.fd_rel_step,
            series_tail_tol: t.series_tail_tol,
            series_max_terms: t.series_max_terms,
            series_direct_terms: t.series_direct_terms,
            quad_abs_tol: t.quad_abs_tol,
            quad_rel_tol: t.quad_rel_tol,
        }
    }
}

impl From<&PyTolerance> for betainv::ToleranceConfig {
    fn from(t: &PyTolerance) -> Self {
        betainv::ToleranceConfig {
            quantile_abs_tol: t.quantile_abs_tol,
            max_newton_iters: t.max_newton_iters,
            fd_rel_step: t.fd_rel_step,
            series_tail_tol: t.series_tail_tol,
            series_max_terms: t.series_max_terms,
            series_direct_terms: t.series_direct_terms,
            quad_abs_tol: t.quad_abs_tol,
            quad_rel_tol: t.quad_rel_tol,
        }
    }
}

#[pymethods]
impl PyTolerance {
    #[new]
    #[pyo3(signature = (quantile_abs_tol=None, series_tail_tol=None, fd_rel_step=None))]
    fn new(quantile_abs_tol: Option<f64>, series_tail_tol: Option<f64>, fd_rel_step: Option<f64>) -> PyResult<Self> {
        let mut t = betainv::ToleranceConfig::default();
        if let Some(v) = quantile_abs_tol {
            t.quantile_abs_tol = v;
        }
        if let Some(v) = series_tail_tol {
            t.series_tail_tol = v;
        }
        if let Some(v) = fd_rel_step {
            t.fd_rel_step = v;
        }
        t.validate().map_err(err)?;
        Ok(t.into())
    }

    fn validate(&self) -> PyResult<()> {
        betainv::ToleranceConfig::from(self).validate().map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", betainv::ToleranceConfig::from(self))
    }
}

fn tolerances(tol: Option<PyRef<'_, PyTolerance>>) -> PyResult<betainv::ToleranceConfig> {
    let t = tol.map(|t| betainv::ToleranceConfig::from(&*t)).unwrap_or_default();
    t.validate().map_err(err)?;
    Ok(t)
}

/// A validated triple (a, b, p): a, b > 0 and 0 < p < 1.
#[pyclass(name = "BetaParams", frozen, from_py_object)]
#[derive(Clone)]
struct PyBetaParams(betainv::BetaParams);

#[pymethods]
impl PyBetaParams {
    #[new]
    fn new(a: f64, b: f64, p: f64) -> PyResult<Self> {
        betainv::BetaParams::new(a, b, p).map(PyBetaParams).map_err(err)
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.a()
    }

    #[getter]
    fn b(&self) -> f64 {
        self.0.b()
    }

    #[getter]
    fn p(&self) -> f64 {
        self.0.p()
    }

    /// (b, a, 1 - p), the parameters of the reflected problem.
    fn swapped(&self) -> Self {
        PyBetaParams(self.0.swapped())
    }

    #[pyo3(signature = (tol=None))]
    fn quantile(&self, tol: Option<PyRef<'_, PyTolerance>>) -> PyResult<PyQuantileResult> {
        let t = tolerances(tol)?;
        solve::quantile(self.0, &t).map(Into::into).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("BetaParams(a={}, b={}, p={})", self.0.a(), self.0.b(), self.0.p())
    }
}

#[pyclass(name = "QuantileResult", frozen, get_all)]
struct PyQuantileResult {
    q: f64,
    psi: f64,
    one_minus_q: f64,
    residual: f64,
    iterations: usize,
    bracket_width: f64,
}

impl From<betainv::QuantileResult> for PyQuantileResult {
    fn from(r: betainv::QuantileResult) -> Self {
        PyQuantileResult {
            q: r.q,
            psi: r.psi,
            one_minus_q: r.one_minus_q,
            residual: r.residual,
            iterations: r.iterations,
            bracket_width: r.bracket_width,
        }
    }
}

#[pymethods]
impl PyQuantileResult {
    fn __repr__(&self) -> String {
        format!(
            "QuantileResult(q={:?}, psi={:?}, residual={:e}, iterations={})",
            self.q, self.psi, self.residual, self.iterations
        )
    }
}

/// Solve I(q; a, b) = p for q.
#[pyfunction]
#[pyo3(signature = (a, b, p, tol=None))]
fn quantile(a: f64, b: f64, p: f64, tol: Option<PyRef<'_, PyTolerance>>) -> PyResult<PyQuantileResult> {
    let t = tolerances(tol)?;
    let params = betainv::BetaParams::new(a, b, p).map_err(err)?;
    solve::quantile(params, &t).map(Into::into).map_err(err)
}

/// The same quantile obtained as 1 - q_{1-p}(b, a).
#[pyfunction]
#[pyo3(signature = (a, b, p, tol=None))]
fn quantile_wrt_b(a: f64, b: f64, p: f64, tol: Option<PyRef<'_, PyTolerance>>) -> PyResult<PyQuantileResult> {
    let t = tolerances(tol)?;
    solve::quantile_wrt_b(a, b, p, &t).map(Into::into).map_err(err)
}

/// -a ln q(a).
#[pyfunction]
#[pyo3(signature = (a, b, p, tol=None))]
fn phi(a: f64, b: f64, p: f64, tol: Option<PyRef<'_, PyTolerance>>) -> PyResult<f64> {
    let t = tolerances(tol)?;
    solve::phi(a, b, p, &t).map_err(err)
}

/// -ln q(a).
#[pyfunction]
#[pyo3(signature = (a, b, p, tol=None))]
fn psi(a: f64, b: f64, p: f64, tol: Option<PyRef<'_, PyTolerance>>) -> PyResult<f64> {
    let t = tolerances(tol)?;
    solve::psi(a, b, p, &t).map_err(err)
}

#[pyfunction]
fn reg_inc_beta(x: f64, a: f64, b: f64) -> PyResult<f64> {
    let params = betainv::BetaParams::new(a, b, 0.5).map_err(err)?;
    betainv::reg_inc_beta(x, params).map_err(err)
}

#[pyfunction]
fn log_beta(a: f64, b: f64) -> PyResult<f64> {
    betainv::log_beta(a, b).map_err(err)
}

#[pyfunction]
fn ln_gamma(x: f64) -> PyResult<f64> {
    gammafns::ln_gamma(x).map_err(err)
}

#[pyfunction]
fn digamma(x: f64) -> PyResult<f64> {
    gammafns::digamma(x).map_err(err)
}

#[pyfunction]
fn reg_lower_gamma(shape: f64, x: f64) -> PyResult<f64> {
    gammafns::reg_lower_gamma(shape, x).map_err(err)
}

#[pyfunction]
fn gamma_quantile(shape: f64, prob: f64) -> PyResult<f64> {
    let query = GammaQuantileQuery::new(shape, prob).map_err(err)?;
    gammafns::gamma_quantile(query).map_err(err)
}

/// psi'(a) from the series; returns (value, terms_used, tail_estimate).
#[pyfunction]
#[pyo3(signature = (a, b, p, tol=None))]
fn psi_prime_series(a: f64, b: f64, p: f64, tol: Option<PyRef<'_, PyTolerance>>) -> PyResult<(f64, usize, f64)> {
    let t = tolerances(tol)?;
    let (v, d) = series::psi_prime_series(a, b, p, &t).map_err(err)?;
    Ok((v, d.terms_used, d.tail_estimate))
}

#[pyfunction]
#[pyo3(signature = (a, b, p, tol=None))]
fn q_prime_series(a: f64, b: f64, p: f64, tol: Option<PyRef<'_, PyTolerance>>) -> PyResult<f64> {
    let t = tolerances(tol)?;
    series::q_prime_series(a, b, p, &t).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (c, psi, b, tol=None))]
fn y_value(c: f64, psi: f64, b: f64, tol: Option<PyRef<'_, PyTolerance>>) -> PyResult<f64> {
    let t = tolerances(tol)?;
    series::y_value(c, psi, b, &t).map_err(err)
}

#[pyfunction]
fn w_eval(x: f64, b: f64) -> PyResult<f64> {
    series::w_eval(x, b).map_err(err)
}

/// (rho, location of the maximum of w).
#[pyfunction]
fn find_rho(b: f64) -> PyResult<(f64, f64)> {
    let r = series::find_rho(b).map_err(err)?;
    Ok((r.rho, r.w_max_location))
}

#[pyfunction]
fn h0_eval(s: f64, b: f64) -> PyResult<f64> {
    series::h0_eval(s, b).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (b, tol=None))]
fn eta_integral_identity(b: f64, tol: Option<PyRef<'_, PyTolerance>>) -> PyResult<f64> {
    let t = tolerances(tol)?;
    series::eta_integral_identity(b, &t).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, b, tol=None))]
fn sum1_check(n: usize, b: f64, tol: Option<PyRef<'_, PyTolerance>>) -> PyResult<f64> {
    let t = tolerances(tol)?;
    series::sum1_check(n, b, &t).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, b, tol=None))]
fn sum2_check(n: usize, b: f64, tol: Option<PyRef<'_, PyTolerance>>) -> PyResult<f64> {
    let t = tolerances(tol)?;
    series::sum2_check(n, b, &t).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, p, tol=None))]
fn hyper1_check(a: f64, b: f64, p: f64, tol: Option<PyRef<'_, PyTolerance>>) -> PyResult<f64> {
    let t = tolerances(tol)?;
    series::hyper1_check(a, b, p, &t).map_err(err)
}

/// A sweep over a as CSV text, header `a,q,log_q,phi,psi_prime_series,psi_second_fd`.
#[pyfunction]
#[pyo3(signature = (b, p, a_min=0.01, a_max=1000.0, points=60, scale="log", tol=None))]
#[allow(clippy::too_many_arguments)]
fn sweep(
    py: Python<'_>,
    b: f64,
    p: f64,
    a_min: f64,
    a_max: f64,
    points: usize,
    scale: &str,
    tol: Option<PyRef<'_, PyTolerance>>,
) -> PyResult<String> {
    let t = tolerances(tol)?;
    let scale = match scale {
        "log" => betainv::Scale::Log,
        "linear" => betainv::Scale::Linear,
        other => return Err(PyValueError::new_err(format!("scale must be 'log' or 'linear', got {other:?}"))),
    };
    let spec = betainv::SweepSpec {
        b,
        p,
        a_min,
        a_max,
        points,
        scale,
    };
    let rows = py.detach(|| betainv::run_sweep(&spec, &t)).map_err(err)?;
    Ok(sweeps::to_csv(&rows))
}

/// Run a verification suite and return the JSON report.
///
/// `families` is an optional JSON list of extra framework instances.
#[pyfunction]
#[pyo3(signature = (suite="all", families=None, tol=None))]
fn verify(py: Python<'_>, suite: &str, families: Option<&str>, tol: Option<PyRef<'_, PyTolerance>>) -> PyResult<String> {
    let t = tolerances(tol)?;
    let suite: Suite = suite.parse().map_err(err)?;
    let instances: Vec<FrameworkInstance> = match families {
        Some(text) => serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?,
        None => Vec::new(),
    };
    let opts = betainv::VerifyOptions {
        tolerances: t,
        instances,
        ..Default::default()
    };
    let report = py.detach(|| run_suite(suite, &opts)).map_err(err)?;
    Ok(report.to_json())
}

#[pymodule]
#[pyo3(name = "betainv")]
fn betainv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ConvergenceError", m.py().get_type::<ConvergenceError>())?;
    m.add_class::<PyTolerance>()?;
    m.add_class::<PyBetaParams>()?;
    m.add_class::<PyQuantileResult>()?;
    m.add_function(wrap_pyfunction!(quantile, m)?)?;
    m.add_function(wrap_pyfunction!(quantile_wrt_b, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(reg_inc_beta, m)?)?;
    m.add_function(wrap_pyfunction!(log_beta, m)?)?;
    m.add_function(wrap_pyfunction!(ln_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(digamma, m)?)?;
    m.add_function(wrap_pyfunction!(reg_lower_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_quantile, m)?)?;
    m.add_function(wrap_pyfunction!(psi_prime_series, m)?)?;
    m.add_function(wrap_pyfunction!(q_prime_series, m)?)?;
    m.add_function(wrap_pyfunction!(y_value, m)?)?;
    m.add_function(wrap_pyfunction!(w_eval, m)?)?;
    m.add_function(wrap_pyfunction!(find_rho, m)?)?;
    m.add_function(wrap_pyfunction!(h0_eval, m)?)?;
    m.add_function(wrap_pyfunction!(eta_integral_identity, m)?)?;
    m.add_function(wrap_pyfunction!(sum1_check, m)?)?;
    m.add_function(wrap_pyfunction!(sum2_check, m)?)?;
    m.add_function(wrap_pyfunction!(hyper1_check, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
