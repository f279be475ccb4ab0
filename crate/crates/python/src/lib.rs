//! Python bindings: `import fbm_records`.

use fbm_records::experiments::{self, ExperimentConfig, ExperimentKind};
use fbm_records::{
    BoxCountCurve, Covering, DimensionEstimate, Error, FbmPath, GeneratorId, HurstParameter, OlsFit, RecordSet,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(err: Error) -> PyErr {
    if err.is_numerical() || matches!(err, Error::InsufficientHits(_)) {
        PyRuntimeError::new_err(err.to_string())
    } else {
        PyValueError::new_err(err.to_string())
    }
}

fn hurst(h: f64) -> PyResult<HurstParameter> {
    HurstParameter::new(h).map_err(to_py)
}

/// A sampled fBm path on the grid t_i = i/n.
#[pyclass(name = "FbmPath", module = "fbm_records", frozen)]
struct PyFbmPath {
    inner: FbmPath,
}

#[pymethods]
impl PyFbmPath {
    /// Wraps user-supplied values; `values[0]` must be 0.
    #[new]
    #[pyo3(signature = (values, hurst_value, seed = 0))]
    fn new(values: Vec<f64>, hurst_value: f64, seed: u64) -> PyResult<Self> {
        let inner =
            FbmPath::from_values(values, hurst(hurst_value)?, seed, GeneratorId::CirculantEmbedding).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn hurst(&self) -> f64 {
        self.inner.hurst().value()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed()
    }

    #[getter]
    fn generator(&self) -> &'static str {
        self.inner.generator().as_str()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    fn times(&self) -> Vec<f64> {
        (0..=self.inner.n()).map(|i| self.inner.time(i)).collect()
    }

    fn running_max(&self) -> Vec<f64> {
        self.inner.running_max()
    }

    fn records(&self) -> PyRecordSet {
        PyRecordSet { inner: fbm_records::extract_records(&self.inner) }
    }

    fn __len__(&self) -> usize {
        self.inner.n() + 1
    }

    fn __repr__(&self) -> String {
        format!(
            "FbmPath(n={}, hurst={}, seed={}, generator='{}')",
            self.inner.n(),
            self.inner.hurst(),
            self.inner.seed(),
            self.inner.generator().as_str()
        )
    }
}

/// Grid indices at which the path attains its running maximum.
#[pyclass(name = "RecordSet", module = "fbm_records", frozen)]
struct PyRecordSet {
    inner: RecordSet,
}

#[pymethods]
impl PyRecordSet {
    #[new]
    fn new(indices: Vec<usize>, n: usize) -> PyResult<Self> {
        Ok(Self { inner: RecordSet::from_indices(indices, n).map_err(to_py)? })
    }

    #[getter]
    fn indices(&self) -> Vec<usize> {
        self.inner.indices().to_vec()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn source(&self) -> &str {
        self.inner.source()
    }

    fn times(&self) -> Vec<f64> {
        self.inner.times()
    }

    fn box_count(&self, k: u32) -> PyResult<u64> {
        fbm_records::box_count(&self.inner, k).map_err(to_py)
    }

    /// `[(k, eps, m_eps), ...]` for k in `k_min..=k_max`.
    fn box_count_curve(&self, k_min: u32, k_max: u32) -> PyResult<Vec<(u32, f64, u64)>> {
        let curve = fbm_records::box_count_curve(&self.inner, k_min, k_max).map_err(to_py)?;
        Ok(curve_rows(&curve))
    }

    fn estimate_dimension<'py>(&self, py: Python<'py>, k_min: u32, k_max: u32) -> PyResult<Bound<'py, PyDict>> {
        let curve = fbm_records::box_count_curve(&self.inner, k_min, k_max).map_err(to_py)?;
        let est = fbm_records::estimate_dimension(&curve, k_min, k_max).map_err(to_py)?;
        dimension_dict(py, &est)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("RecordSet(n={}, records={})", self.inner.n(), self.inner.len())
    }
}

fn curve_rows(curve: &BoxCountCurve) -> Vec<(u32, f64, u64)> {
    curve.entries.iter().map(|e| (e.k, e.eps, e.m_eps)).collect()
}

fn dimension_dict<'py>(py: Python<'py>, est: &DimensionEstimate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("slope", est.slope)?;
    d.set_item("dimension", est.dimension)?;
    d.set_item("stderr", est.stderr)?;
    d.set_item("k_range", est.k_range)?;
    d.set_item("r_squared", est.r_squared)?;
    Ok(d)
}

fn ols_dict<'py>(py: Python<'py>, fit: &OlsFit) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("slope", fit.slope)?;
    d.set_item("intercept", fit.intercept)?;
    d.set_item("stderr", fit.stderr)?;
    d.set_item("r_squared", fit.r_squared)?;
    Ok(d)
}

/// Samples fBm on `n` steps; `generator` is "circulant", "durbin-levinson" or "cholesky".
#[pyfunction]
#[pyo3(signature = (hurst_value, n, seed, generator = "circulant"))]
fn generate(hurst_value: f64, n: usize, seed: u64, generator: &str) -> PyResult<PyFbmPath> {
    let id: GeneratorId = generator.parse().map_err(to_py)?;
    let inner = fbm_records::generate(id, hurst(hurst_value)?, n, seed).map_err(to_py)?;
    Ok(PyFbmPath { inner })
}

/// The two independent paths from one circulant synthesis.
#[pyfunction]
fn generate_circulant_pair(hurst_value: f64, n: usize, seed: u64) -> PyResult<(PyFbmPath, PyFbmPath)> {
    let (a, b) = fbm_records::generate_circulant_pair(hurst(hurst_value)?, n, seed).map_err(to_py)?;
    Ok((PyFbmPath { inner: a }, PyFbmPath { inner: b }))
}

#[pyfunction]
fn fgn_autocovariance(hurst_value: f64, k: i64) -> PyResult<f64> {
    Ok(fbm_records::fgn_autocovariance(hurst(hurst_value)?, k))
}

/// Upper tail of the standard normal, P(Z > v).
#[pyfunction]
fn normal_tail(v: f64) -> f64 {
    fbm_records::normal_tail(v)
}

#[pyfunction]
fn extract_records(path: PyRef<'_, PyFbmPath>) -> PyRecordSet {
    path.records()
}

#[pyfunction]
fn ols_slope<'py>(py: Python<'py>, points: Vec<(f64, f64)>) -> PyResult<Bound<'py, PyDict>> {
    ols_dict(py, &fbm_records::ols_slope(&points).map_err(to_py)?)
}

/// Dimension from `[(k, m_eps), ...]`: minus the slope of log2 m against log2 2^-k.
#[pyfunction]
fn dimension_from_counts<'py>(py: Python<'py>, counts: Vec<(u32, f64)>) -> PyResult<Bound<'py, PyDict>> {
    dimension_dict(py, &fbm_records::dimension_from_counts(&counts).map_err(to_py)?)
}

/// Sum of `diameter^alpha` over a covering given as `[(left, right), ...]`.
#[pyfunction]
fn alpha_value(intervals: Vec<(f64, f64)>, alpha: f64) -> PyResult<f64> {
    let covering = Covering::new(intervals).map_err(to_py)?;
    fbm_records::alpha_value(&covering, alpha).map_err(to_py)
}

/// Regression band used when none is given.
#[pyfunction]
fn default_fit_range(n: usize) -> Option<(u32, u32)> {
    fbm_records::default_fit_range(n)
}

/// Runs an experiment. `kind` is one of "dimension-sweep", "record-interval-prob",
/// "argmax-prob", "survival-prob", "sup-tail"; `config` is an ExperimentConfig as JSON.
/// Returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (kind, config, workers = 0))]
fn run_experiment(py: Python<'_>, kind: &str, config: &str, workers: usize) -> PyResult<String> {
    let kind: ExperimentKind = serde_json::from_value(serde_json::Value::String(kind.to_string()))
        .map_err(|_| PyValueError::new_err(format!("unknown experiment kind '{kind}'")))?;
    let cfg: ExperimentConfig =
        serde_json::from_str(config).map_err(|e| PyValueError::new_err(format!("bad config: {e}")))?;
    let report = py.detach(|| experiments::run(kind, &cfg, workers)).map_err(to_py)?;
    serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule(name = "fbm_records")]
fn fbm_records_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFbmPath>()?;
    m.add_class::<PyRecordSet>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(generate_circulant_pair, m)?)?;
    m.add_function(wrap_pyfunction!(fgn_autocovariance, m)?)?;
    m.add_function(wrap_pyfunction!(normal_tail, m)?)?;
    m.add_function(wrap_pyfunction!(extract_records, m)?)?;
    m.add_function(wrap_pyfunction!(ols_slope, m)?)?;
    m.add_function(wrap_pyfunction!(dimension_from_counts, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_value, m)?)?;
    m.add_function(wrap_pyfunction!(default_fit_range, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
