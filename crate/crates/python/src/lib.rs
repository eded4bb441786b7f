//! Python bindings for `relaycov`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use relaycov::capacity::{self, ChannelEnsemble};
use relaycov::cli::parse_fading;
use relaycov::cooperation;
use relaycov::coverage::{self, RateMetric, SweepOptions};
use relaycov::matrixkit::{self, ComplexMatrix};
use relaycov::{Error, FadingModel};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(format!("[{}] {e}", e.code()))
}

fn fading(key: &str, spec: Option<&str>) -> PyResult<FadingModel> {
    spec.map_or(Ok(FadingModel::Rayleigh), |s| {
        parse_fading(key, s).map_err(py_err)
    })
}

#[pyclass(name = "ScenarioConfig", module = "pyrelaycov")]
struct PyScenario(capacity::ScenarioConfig);

#[pymethods]
impl PyScenario {
    /// Fading models use the config grammar: `rayleigh` or
    /// `rician:K=<k>:los=<poor|well>`; `fading` sets every link.
    #[new]
    #[pyo3(signature = (p_s=10.0, p_r=10.0, p_r2=None, antennas=2, alpha=3.52, rate_target=5.5,
                        fading=None, fading_sr=None, fading_sd=None, fading_rd=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        p_s: f64,
        p_r: f64,
        p_r2: Option<f64>,
        antennas: usize,
        alpha: f64,
        rate_target: f64,
        fading: Option<&str>,
        fading_sr: Option<&str>,
        fading_sd: Option<&str>,
        fading_rd: Option<&str>,
    ) -> PyResult<Self> {
        let link = |key, spec: Option<&str>| self::fading(key, spec.or(fading));
        let scn = capacity::ScenarioConfig {
            p_s,
            p_r,
            p_r2,
            alpha,
            rate_target,
            fading_sr: link("fading_sr", fading_sr)?,
            fading_sd: link("fading_sd", fading_sd)?,
            fading_rd: link("fading_rd", fading_rd)?,
            ..capacity::ScenarioConfig::default()
        }
        .with_antennas(antennas);
        scn.validate().map_err(py_err)?;
        Ok(Self(scn))
    }

    #[getter]
    fn p_s(&self) -> f64 {
        self.0.p_s
    }

    #[getter]
    fn p_r(&self) -> f64 {
        self.0.p_r
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha
    }

    #[getter]
    fn rate_target(&self) -> f64 {
        self.0.rate_target
    }

    #[getter]
    fn antennas(&self) -> (usize, usize, usize, usize) {
        (self.0.n_s, self.0.n_r, self.0.m_r, self.0.m_d)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "McConfig", module = "pyrelaycov")]
struct PyMc(relaycov::McConfig);

#[pymethods]
impl PyMc {
    #[new]
    #[pyo3(signature = (seed=42, samples=20_000, streams=8))]
    fn new(seed: u64, samples: usize, streams: usize) -> PyResult<Self> {
        relaycov::McConfig::new(seed, samples, streams)
            .map(Self)
            .map_err(py_err)
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }

    #[getter]
    fn samples(&self) -> usize {
        self.0.samples
    }

    #[getter]
    fn streams(&self) -> usize {
        self.0.streams
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "SolverConfig", module = "pyrelaycov")]
struct PySolver(relaycov::SolverConfig);

#[pymethods]
impl PySolver {
    #[new]
    #[pyo3(signature = (r_lo=0.05, r_hi=10.0, tol=1e-4, max_iter=100, scan_steps=64))]
    fn new(r_lo: f64, r_hi: f64, tol: f64, max_iter: usize, scan_steps: usize) -> PyResult<Self> {
        let s = relaycov::SolverConfig {
            r_lo,
            r_hi,
            tol,
            max_iter,
            scan_steps,
        };
        s.validate().map_err(py_err)?;
        Ok(Self(s))
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "BoundEstimate", module = "pyrelaycov", frozen)]
struct PyEstimate(relaycov::BoundEstimate);

#[pymethods]
impl PyEstimate {
    #[getter]
    fn mean(&self) -> f64 {
        self.0.mean
    }

    #[getter]
    fn std_error(&self) -> f64 {
        self.0.std_error
    }

    #[getter]
    fn samples_used(&self) -> usize {
        self.0.samples_used
    }

    fn __repr__(&self) -> String {
        format!(
            "BoundEstimate(mean={}, std_error={}, samples_used={})",
            self.0.mean, self.0.std_error, self.0.samples_used
        )
    }
}

/// One draw of channel matrices shared by every estimate made on it.
#[pyclass(name = "ChannelEnsemble", module = "pyrelaycov", frozen)]
struct PyEnsemble(ChannelEnsemble);

#[pymethods]
impl PyEnsemble {
    #[new]
    fn new(scenario: PyRef<'_, PyScenario>, mc: PyRef<'_, PyMc>) -> PyResult<Self> {
        ChannelEnsemble::draw(&scenario.0, &mc.0)
            .map(Self)
            .map_err(py_err)
    }

    fn c1(&self, r_d: f64, r_r: f64) -> PyEstimate {
        PyEstimate(self.0.c1(r_d, r_r))
    }

    fn c2(&self, r_d: f64, r_dr: f64) -> PyEstimate {
        PyEstimate(self.0.c2(r_d, r_dr))
    }

    fn c3(&self, r_r: f64) -> PyEstimate {
        PyEstimate(self.0.c3(r_r))
    }

    fn coop_sum_rate(&self, r_d: f64, r_dr1: f64, r_dr2: f64) -> PyEstimate {
        PyEstimate(self.0.coop_sum_rate(r_d, r_dr1, r_dr2))
    }

    /// `(c1, c2, c3, cutset, df)` means for a relay and destination in
    /// Cartesian coordinates, source at the origin.
    fn bounds(&self, relay: (f64, f64), dest: (f64, f64)) -> (f64, f64, f64, f64, f64) {
        let d = relaycov::LinkDistances::from_cartesian(relay, dest);
        let b = self.0.bounds(&d, relaycov::MinMode::PerSample);
        (b.c1.mean, b.c2.mean, b.c3.mean, b.cutset.mean, b.df.mean)
    }
}

#[pyfunction]
#[pyo3(signature = (scenario, mc, solver=None))]
fn optimal_relay_radius(
    scenario: PyRef<'_, PyScenario>,
    mc: PyRef<'_, PyMc>,
    solver: Option<PyRef<'_, PySolver>>,
) -> PyResult<f64> {
    let solver = solver.map(|s| s.0).unwrap_or_default();
    coverage::optimal_relay_radius(&scenario.0, &mc.0, &solver).map_err(py_err)
}

/// Returns `(theta_radians, r_max)` lists.
#[pyfunction]
#[pyo3(signature = (scenario, r_r, relay_count, angular_steps, mc, solver=None, metric="df", cooperative=false))]
#[allow(clippy::too_many_arguments)]
fn coverage_boundary(
    scenario: PyRef<'_, PyScenario>,
    r_r: f64,
    relay_count: usize,
    angular_steps: usize,
    mc: PyRef<'_, PyMc>,
    solver: Option<PyRef<'_, PySolver>>,
    metric: &str,
    cooperative: bool,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let solver = solver.map(|s| s.0).unwrap_or_default();
    let region = if cooperative {
        cooperation::coop_coverage_boundary(
            &scenario.0,
            r_r,
            relay_count,
            angular_steps,
            &mc.0,
            &solver,
            true,
        )
    } else {
        let metric = match metric {
            "df" => RateMetric::Df,
            "cutset" => RateMetric::CutSet,
            other => {
                return Err(PyValueError::new_err(format!(
                    "metric must be df or cutset, got {other}"
                )))
            }
        };
        let options = SweepOptions {
            metric,
            ..SweepOptions::default()
        };
        coverage::coverage_boundary(
            &scenario.0,
            r_r,
            relay_count,
            angular_steps,
            &mc.0,
            &solver,
            &options,
        )
    }
    .map_err(py_err)?;
    Ok(region.entries.iter().map(|p| (p.theta, p.r_max)).unzip())
}

#[pyfunction]
fn high_snr_rate(m: usize, n: usize, n_s: usize, rho: f64) -> PyResult<f64> {
    capacity::high_snr_rate(m, n, n_s, rho).map_err(py_err)
}

#[pyfunction]
fn coop_high_snr_sum_rate(n_r: usize, m_d: usize, rho: f64) -> PyResult<f64> {
    cooperation::coop_high_snr_sum_rate(n_r, m_d, rho).map_err(py_err)
}

#[pyfunction]
fn low_snr_sum_rate(m_d: usize, rho_dr: f64) -> PyResult<f64> {
    cooperation::low_snr_sum_rate(m_d, rho_dr).map_err(py_err)
}

/// Returns `(k1, k2)`.
#[pyfunction]
fn fit_k1_k2(points: Vec<(f64, f64)>) -> PyResult<(f64, f64)> {
    cooperation::fit_k1_k2(&points)
        .map(|f| (f.k1, f.k2))
        .map_err(py_err)
}

#[pyfunction]
fn power_ratio(k2: f64, p_d: f64, gamma: f64) -> PyResult<f64> {
    cooperation::power_ratio(k2, p_d, gamma).map_err(py_err)
}

/// Returns `(literal, coverage_gain)`.
#[pyfunction]
#[pyo3(signature = (k2, p_d, gamma, b=35.22))]
fn extension_factor(k2: f64, p_d: f64, gamma: f64, b: f64) -> PyResult<(f64, f64)> {
    cooperation::extension_factor(k2, p_d, gamma, b)
        .map(|f| (f.literal, f.coverage_gain))
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (d, a=120.0, b=35.22))]
fn hata_path_loss(d: f64, a: f64, b: f64) -> PyResult<f64> {
    cooperation::hata_path_loss(&cooperation::HataParams { a, b }, d).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (p_max_t_db, p_d_db, a=120.0, b=35.22))]
fn max_distance(p_max_t_db: f64, p_d_db: f64, a: f64, b: f64) -> f64 {
    cooperation::max_distance(&cooperation::HataParams { a, b }, p_max_t_db, p_d_db)
}

fn matrix(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("ragged matrix"));
    }
    ComplexMatrix::from_vec(r, c, rows.into_iter().flatten().collect()).map_err(py_err)
}

/// `log2 det(I + M)` for a Hermitian PSD matrix given as nested lists.
#[pyfunction]
fn logdet_identity_plus(m: Vec<Vec<Complex64>>) -> PyResult<f64> {
    matrixkit::logdet_identity_plus(&matrix(m)?).map_err(py_err)
}

#[pyfunction]
fn singular_values(h: Vec<Vec<Complex64>>) -> PyResult<Vec<f64>> {
    Ok(matrixkit::singular_values(&matrix(h)?))
}

#[pymodule]
fn pyrelaycov(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PyMc>()?;
    m.add_class::<PySolver>()?;
    m.add_class::<PyEstimate>()?;
    m.add_class::<PyEnsemble>()?;
    m.add_function(wrap_pyfunction!(optimal_relay_radius, m)?)?;
    m.add_function(wrap_pyfunction!(coverage_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(high_snr_rate, m)?)?;
    m.add_function(wrap_pyfunction!(coop_high_snr_sum_rate, m)?)?;
    m.add_function(wrap_pyfunction!(low_snr_sum_rate, m)?)?;
    m.add_function(wrap_pyfunction!(fit_k1_k2, m)?)?;
    m.add_function(wrap_pyfunction!(power_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(extension_factor, m)?)?;
    m.add_function(wrap_pyfunction!(hata_path_loss, m)?)?;
    m.add_function(wrap_pyfunction!(max_distance, m)?)?;
    m.add_function(wrap_pyfunction!(logdet_identity_plus, m)?)?;
    m.add_function(wrap_pyfunction!(singular_values, m)?)?;
    Ok(())
}
