//! Python extension module for the verification toolkit: the circle and
//! line function types, the fractional operators on them, and the suite
//! runner returning reports as dictionaries.
//!
//! Build with `cargo build -p fracverify-py --release`; the produced
//! `libfracverify_py.so` imports as `fracverify_py` once renamed or
//! symlinked to `fracverify_py.so` on the Python path (see
//! `python/smoke_test.py`, which does this automatically).

use std::str::FromStr;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fracverify::frac_line::{fraclap_line_pv, gagliardo_seminorm_line, SampledLineFunction};
use fracverify::hopf::{hopf_coefficients, hopf_hminus3_norm};
use fracverify::pohozaev::{
    boundary_limits, chebyshev_solve, pohozaev_dilation_residual, pohozaev_translation_residual,
    Nonlinearity,
};
use fracverify::report::VerificationReport;
use fracverify::spectral_circle::{CircleFunction, SeminormKind};
use fracverify::suite::{run_suite as run_suite_impl, MapChoice, Suite, SuiteConfig};

fn value_err(e: fracverify::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Finite Fourier series on the circle, vector-valued.
#[pyclass(frozen, skip_from_py_object, name = "CircleFunction")]
#[derive(Clone)]
struct PyCircleFunction {
    inner: CircleFunction,
}

#[pymethods]
impl PyCircleFunction {
    /// cos(kθ).
    #[staticmethod]
    fn cosine(k: usize) -> Self {
        PyCircleFunction {
            inner: CircleFunction::cosine(k),
        }
    }

    /// sin(kθ).
    #[staticmethod]
    fn sine(k: usize) -> Self {
        PyCircleFunction {
            inner: CircleFunction::sine(k),
        }
    }

    /// Constant function with the given component values.
    #[staticmethod]
    fn constant(values: Vec<f64>) -> Self {
        PyCircleFunction {
            inner: CircleFunction::constant(&values),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyCircleFunction {
            inner: CircleFunction::from_json(text).map_err(value_err)?,
        })
    }

    /// self + c·other.
    fn add_scaled(&self, c: f64, other: &PyCircleFunction) -> PyResult<Self> {
        Ok(PyCircleFunction {
            inner: self.inner.add_scaled(c, &other.inner).map_err(value_err)?,
        })
    }

    /// (−Δ)^s via the |k|^{2s} multiplier.
    fn fractional_laplacian(&self, s: f64) -> PyResult<Self> {
        Ok(PyCircleFunction {
            inner: self.inner.fractional_laplacian(s).map_err(value_err)?,
        })
    }

    fn hilbert_transform(&self) -> Self {
        PyCircleFunction {
            inner: self.inner.hilbert_transform(),
        }
    }

    fn derivative(&self) -> Self {
        PyCircleFunction {
            inner: self.inner.derivative(),
        }
    }

    fn eval(&self, theta: f64) -> Vec<f64> {
        self.inner.eval_at(theta)
    }

    fn mean(&self) -> Vec<f64> {
        self.inner.mean()
    }

    fn bandwidth(&self) -> usize {
        self.inner.bandwidth()
    }

    fn components(&self) -> usize {
        self.inner.components()
    }

    /// [u]_{Ḣ^order} = (Σ|k|^{2·order}|û(k)|²)^{1/2}.
    fn sobolev_seminorm(&self, order: f64) -> f64 {
        self.inner.seminorm(SeminormKind::Sobolev(order)).value
    }

    /// (max_k |ℋ(k)|, argmax k) of the half-Hopf differential.
    fn hopf_max(&self) -> (f64, usize) {
        hopf_coefficients(&self.inner).max_abs()
    }

    /// ℋ(k) as (re, im); zero outside the retained range.
    fn hopf_coefficient(&self, k: usize) -> (f64, f64) {
        let v = hopf_coefficients(&self.inner).value(k);
        (v.re, v.im)
    }

    /// ‖ℋ‖ in H^{−3}.
    fn hopf_hminus3(&self) -> f64 {
        hopf_hminus3_norm(&hopf_coefficients(&self.inner))
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "CircleFunction(components={}, bandwidth={})",
            self.inner.components(),
            self.inner.bandwidth()
        )
    }
}

/// Uniform-grid samples on [a,b], extended by zero outside.
#[pyclass(frozen, skip_from_py_object, name = "SampledLineFunction")]
#[derive(Clone)]
struct PyLineFunction {
    inner: SampledLineFunction,
}

#[pymethods]
impl PyLineFunction {
    /// Scalar function from its node samples at a + i·(b−a)/(len−1).
    #[staticmethod]
    fn from_samples(a: f64, b: f64, samples: Vec<f64>) -> PyResult<Self> {
        Ok(PyLineFunction {
            inner: SampledLineFunction::from_samples(a, b, vec![samples]).map_err(value_err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyLineFunction {
            inner: SampledLineFunction::from_json(text).map_err(value_err)?,
        })
    }

    /// (−Δ)^s u(x) by principal-value quadrature, per component.
    fn fraclap(&self, s: f64, x: f64) -> PyResult<Vec<f64>> {
        fraclap_line_pv(&self.inner, s, x).map_err(value_err)
    }

    fn eval(&self, x: f64) -> Vec<f64> {
        self.inner.eval(x)
    }

    fn support(&self) -> (f64, f64) {
        self.inner.support()
    }

    fn step(&self) -> f64 {
        self.inner.step()
    }

    /// Squared Gagliardo seminorm [u]²_{Ẇ^{σ,2}} over the grid square.
    fn gagliardo_seminorm(&self, sigma: f64) -> f64 {
        gagliardo_seminorm_line(&self.inner, sigma)
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(value_err)
    }

    fn __repr__(&self) -> String {
        let (a, b) = self.inner.support();
        format!(
            "SampledLineFunction(a={a}, b={b}, nodes={}, components={})",
            self.inner.nodes(),
            self.inner.components()
        )
    }
}

fn report_dict<'py>(py: Python<'py>, r: &VerificationReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("check", &r.check)?;
    d.set_item("residual", r.residual)?;
    d.set_item("tolerance", r.tolerance)?;
    d.set_item("pass", r.pass)?;
    d.set_item("resolution", r.resolution)?;
    let params = PyDict::new(py);
    for (k, v) in &r.params {
        params.set_item(k, v)?;
    }
    d.set_item("params", params)?;
    Ok(d)
}

/// Run a verification suite; returns one dict per check.
#[pyfunction]
#[pyo3(signature = (name, seed = 7, resolution = None, tolerance = None, map = None, pairs = None, f = None, interval = None))]
#[allow(clippy::too_many_arguments)]
fn run_suite<'py>(
    py: Python<'py>,
    name: &str,
    seed: u64,
    resolution: Option<usize>,
    tolerance: Option<f64>,
    map: Option<&str>,
    pairs: Option<(usize, usize)>,
    f: Option<&str>,
    interval: Option<(f64, f64)>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let suite = Suite::from_str(name).map_err(value_err)?;
    let map = map.map(MapChoice::from_str).transpose().map_err(value_err)?;
    let nonlinearity = f.map(Nonlinearity::from_str).transpose().map_err(value_err)?;
    let pairs = match pairs {
        None => None,
        Some((i, k)) => {
            if i == 0 || k == 0 || i == k {
                return Err(PyValueError::new_err(
                    "pairs are 1-based distinct component indices",
                ));
            }
            Some((i - 1, k - 1))
        }
    };
    let config = SuiteConfig {
        resolution,
        tolerance,
        seed,
        map,
        pairs,
        nonlinearity,
        interval,
    };
    let reports = run_suite_impl(suite, &config).map_err(value_err)?;
    reports.iter().map(|r| report_dict(py, r)).collect()
}

/// Names accepted by run_suite.
#[pyfunction]
fn suite_names() -> Vec<&'static str> {
    Suite::all().iter().map(|s| s.name()).collect()
}

/// Solve (−Δ)^{1/2}u = f(u) on (a,b) and evaluate the Pohozaev identities.
#[pyfunction]
#[pyo3(signature = (f = "const1", a = -1.0, b = 1.0))]
fn pohozaev_identities<'py>(py: Python<'py>, f: &str, a: f64, b: f64) -> PyResult<Bound<'py, PyDict>> {
    let f = Nonlinearity::from_str(f).map_err(value_err)?;
    let basis = if matches!(f, Nonlinearity::Constant(_)) { 16 } else { 64 };
    let solution = chebyshev_solve(f, a, b, basis, 1e-12).map_err(value_err)?;
    let dilation = pohozaev_dilation_residual(&solution).map_err(value_err)?;
    let translation = pohozaev_translation_residual(&solution).map_err(value_err)?;
    let limits = boundary_limits(&solution).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("dilation_lhs", dilation.lhs)?;
    d.set_item("dilation_rhs", dilation.rhs)?;
    d.set_item("translation_lhs", translation.lhs)?;
    d.set_item("translation_rhs", translation.rhs)?;
    d.set_item("l_a", limits.l_a)?;
    d.set_item("l_b", limits.l_b)?;
    d.set_item("solution_json", solution.to_json().map_err(value_err)?)?;
    Ok(d)
}

#[pymodule]
fn fracverify_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircleFunction>()?;
    m.add_class::<PyLineFunction>()?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(suite_names, m)?)?;
    m.add_function(wrap_pyfunction!(pohozaev_identities, m)?)?;
    Ok(())
}
