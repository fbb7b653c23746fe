//! Python bindings for the `solenoid` crate.
//!
//! Angles are plain floats in radians; [`parse_angle`] accepts the same
//! literals as the command line (`pi/2`, `-pi/4`, ...).

use clap::Parser;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict};

use solenoid::assembly::{self, ExtensionChoice};
use solenoid::cli::{self, Cli, CliError, Format, JobConfig};
use solenoid::verify::QuadratureConfig;
use solenoid::{ab_radial, dirac_radial, ms_radial, suites, Angle, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter(_) | Error::MissingExtension { .. } | Error::RegionMismatch { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn cli_to_py(e: CliError) -> PyErr {
    match e {
        CliError::Solver(e) => to_py(e),
        CliError::Config(_) => PyValueError::new_err(e.to_string()),
        CliError::Io { .. } => PyRuntimeError::new_err(e.to_string()),
    }
}

fn angle(x: Option<f64>) -> PyResult<Option<Angle>> {
    x.map(Angle::new).transpose().map_err(to_py)
}

/// Reduces an angle literal such as `"pi/3"` to radians in (−π/2, π/2].
#[pyfunction]
fn parse_angle(text: &str) -> PyResult<f64> {
    Angle::parse(text).map(Angle::radians).map_err(to_py)
}

#[pyclass(name = "FluxConfig", frozen)]
struct PyFluxConfig(solenoid::FluxConfig);

#[pymethods]
impl PyFluxConfig {
    #[new]
    #[pyo3(signature = (phi, gamma = 0.0, eps_b = 1, eps_q = 1, kappa0 = 1.0))]
    fn new(phi: f64, gamma: f64, eps_b: i8, eps_q: i8, kappa0: f64) -> PyResult<Self> {
        let cfg = solenoid::FluxConfig::new(phi, eps_b, eps_q, gamma).and_then(|c| c.with_kappa0(kappa0));
        cfg.map(Self).map_err(to_py)
    }

    /// Configuration with flux mantissa `mu` and ε_B = ε_q = 1.
    #[staticmethod]
    #[pyo3(signature = (mu, gamma = 0.0, kappa0 = 1.0))]
    fn from_mantissa(mu: f64, gamma: f64, kappa0: f64) -> PyResult<Self> {
        let cfg = solenoid::FluxConfig::from_mantissa(mu, gamma).and_then(|c| c.with_kappa0(kappa0));
        cfg.map(Self).map_err(to_py)
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.0.phi
    }
    #[getter]
    fn phi0(&self) -> i64 {
        self.0.phi0
    }
    #[getter]
    fn mu(&self) -> f64 {
        self.0.mu
    }
    #[getter]
    fn eps(&self) -> i8 {
        self.0.eps
    }
    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma
    }
    #[getter]
    fn kappa0(&self) -> f64 {
        self.0.kappa0
    }

    /// Channels whose radial operator has a one-parameter extension family.
    fn extension_channels(&self) -> Vec<i64> {
        self.0.extension_channels()
    }

    /// "R1", "R2" or "R3" for channel `l`.
    fn region(&self, l: i64) -> String {
        ab_radial::classify(l, self.0.mu).region.to_string()
    }

    fn __repr__(&self) -> String {
        format!("FluxConfig(phi={}, mu={}, gamma={}, kappa0={})", self.0.phi, self.0.mu, self.0.gamma, self.0.kappa0)
    }
}

/// A discrete level of a magnetic-solenoid radial operator.
#[pyclass(name = "MsLevel", frozen)]
struct PyMsLevel(ms_radial::MsLevel);

#[pymethods]
impl PyMsLevel {
    #[getter]
    fn l(&self) -> i64 {
        self.0.l
    }
    #[getter]
    fn m(&self) -> u32 {
        self.0.m
    }
    #[getter]
    fn energy(&self) -> f64 {
        self.0.energy
    }
    #[getter]
    fn weight(&self) -> f64 {
        self.0.weight
    }
    #[getter]
    fn region(&self) -> String {
        self.0.tag.region.to_string()
    }

    /// Normalized radial function U(ρ).
    fn __call__(&self, rho: f64) -> f64 {
        self.0.eval(rho)
    }

    fn __repr__(&self) -> String {
        format!("MsLevel(l={}, m={}, energy={})", self.0.l, self.0.m, self.0.energy)
    }
}

/// Radial levels m = 0..=m_max of channel `l`.
#[pyfunction]
#[pyo3(signature = (cfg, l, lam = None, m_max = 10))]
fn ms_levels(cfg: &PyFluxConfig, l: i64, lam: Option<f64>, m_max: u32) -> PyResult<Vec<PyMsLevel>> {
    let levels = ms_radial::discrete_spectrum(l, &cfg.0, angle(lam)?, m_max).map_err(to_py)?;
    Ok(levels.into_iter().map(PyMsLevel).collect())
}

/// A level of the 2D magnetic-solenoid Hamiltonian.
#[pyclass(name = "Level2D", frozen)]
struct PyLevel2D(assembly::Level2D);

#[pymethods]
impl PyLevel2D {
    #[getter]
    fn n(&self) -> u64 {
        self.0.n
    }
    #[getter]
    fn l(&self) -> i64 {
        self.0.l
    }
    #[getter]
    fn m(&self) -> u64 {
        self.0.m
    }
    #[getter]
    fn energy(&self) -> f64 {
        self.0.energy
    }
    #[getter]
    fn region(&self) -> String {
        self.0.region.to_string()
    }

    /// Ψ(ρ, φ) as a Python complex.
    fn __call__<'py>(&self, py: Python<'py>, rho: f64, phi: f64) -> Bound<'py, PyComplex> {
        let z = self.0.eval(rho, phi);
        PyComplex::from_doubles(py, z.re, z.im)
    }

    fn __repr__(&self) -> String {
        format!("Level2D(n={}, l={}, m={}, energy={})", self.0.n, self.0.l, self.0.m, self.0.energy)
    }
}

/// Discrete 2D spectrum over channels l_min..=l_max, sorted by energy.
#[pyfunction]
#[pyo3(signature = (cfg, lambda0 = None, lambda_m1 = None, m_s = 1.0, l_min = -5, l_max = 5, n_max = 10))]
fn ms_spectrum_2d(
    cfg: &PyFluxConfig,
    lambda0: Option<f64>,
    lambda_m1: Option<f64>,
    m_s: f64,
    l_min: i64,
    l_max: i64,
    n_max: u64,
) -> PyResult<Vec<PyLevel2D>> {
    let choice = ExtensionChoice::constant(angle(lambda0)?, angle(lambda_m1)?);
    let levels = assembly::spectrum_2d(&cfg.0, &choice, m_s, l_min..=l_max, n_max).map_err(to_py)?;
    Ok(levels.into_iter().map(PyLevel2D).collect())
}

/// Energy of the negative AB level of channel `l`, or None.
#[pyfunction]
fn ab_bound_energy(cfg: &PyFluxConfig, l: i64, lam: f64) -> PyResult<Option<f64>> {
    let b = ab_radial::bound_state(l, &cfg.0, Angle::new(lam).map_err(to_py)?).map_err(to_py)?;
    Ok(b.map(|b| b.energy))
}

/// δ-normalized AB continuum radial function U_E(ρ).
#[pyfunction]
#[pyo3(signature = (cfg, l, energy, rho, lam = None))]
fn ab_continuum(cfg: &PyFluxConfig, l: i64, energy: f64, rho: f64, lam: Option<f64>) -> PyResult<f64> {
    ab_radial::continuous_eigenfunction(l, &cfg.0, angle(lam)?, energy, rho).map_err(to_py)
}

#[pyclass(name = "DiracParams", frozen)]
struct PyDiracParams(solenoid::DiracParams);

#[pymethods]
impl PyDiracParams {
    #[new]
    #[pyo3(signature = (m_e, p_z, s, l, mu, gamma, eps = 1))]
    fn new(m_e: f64, p_z: f64, s: i8, l: i64, mu: f64, gamma: f64, eps: i8) -> PyResult<Self> {
        solenoid::DiracParams::new(m_e, p_z, s, l, mu, gamma, eps).map(Self).map_err(to_py)
    }

    /// M = √(m_e² + p_z²).
    fn mass(&self) -> f64 {
        self.0.mass()
    }

    fn kappa_l(&self) -> f64 {
        self.0.kappa_l()
    }

    fn region(&self) -> String {
        self.0.region().to_string()
    }
}

/// A discrete level of a radial Dirac operator.
#[pyclass(name = "DiracLevel", frozen)]
struct PyDiracLevel(dirac_radial::DiracLevel);

#[pymethods]
impl PyDiracLevel {
    #[getter]
    fn n(&self) -> i64 {
        self.0.n
    }
    #[getter]
    fn sigma(&self) -> i8 {
        self.0.sigma
    }
    #[getter]
    fn energy(&self) -> f64 {
        self.0.energy
    }
    #[getter]
    fn weight(&self) -> f64 {
        self.0.weight
    }
    #[getter]
    fn region(&self) -> String {
        self.0.region.to_string()
    }

    /// Normalized doublet (f, g) at ρ.
    fn __call__(&self, rho: f64) -> PyResult<(f64, f64)> {
        let d = self.0.eval(rho).map_err(to_py)?;
        Ok((d.f, d.g))
    }

    fn __repr__(&self) -> String {
        format!("DiracLevel(n={}, region={}, energy={})", self.0.n, self.0.region, self.0.energy)
    }
}

/// Levels with |index| ≤ k_max; `lam` is required in the third region.
#[pyfunction]
#[pyo3(signature = (params, lam = None, k_max = 10))]
fn dirac_levels(params: &PyDiracParams, lam: Option<f64>, k_max: u64) -> PyResult<Vec<PyDiracLevel>> {
    let levels = dirac_radial::spectrum(&params.0, angle(lam)?, k_max).map_err(to_py)?;
    Ok(levels.into_iter().map(PyDiracLevel).collect())
}

/// Runs a verification suite (or "all") and returns one dict per suite.
#[pyfunction]
#[pyo3(signature = (suite = "all", seed = 1, tol = 1e-9))]
fn verify<'py>(py: Python<'py>, suite: &str, seed: u64, tol: f64) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let qcfg = QuadratureConfig { rel_tol: tol, ..Default::default() };
    let reports = py.detach(|| suites::run(suite, seed, &qcfg)).map_err(to_py)?;
    reports
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("name", r.check_name)?;
            d.set_item("max_abs_deviation", r.max_abs_deviation)?;
            d.set_item("threshold", r.threshold)?;
            d.set_item("pass", r.pass)?;
            d.set_item("details", r.details)?;
            Ok(d)
        })
        .collect()
}

/// Runs command-line arguments (without the program name) and returns
/// the rendered output. Honours `--out`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> PyResult<String> {
    let cli = Cli::try_parse_from(std::iter::once("solenoid".to_string()).chain(args))
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let render = || -> Result<String, CliError> {
        let job = cli::resolve(JobConfig { options: cli.options.clone(), job: cli.command.clone() })?;
        let table = cli::execute(&job)?.table;
        Ok(match job.options.format {
            Format::Csv => table.to_csv(&job),
            Format::Json => table.to_json(&job),
        })
    };
    let text = py.detach(render).map_err(cli_to_py)?;
    if let Some(path) = &cli.out {
        std::fs::write(path, &text).map_err(|e| PyRuntimeError::new_err(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

#[pymodule]
#[pyo3(name = "solenoid")]
fn solenoid_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", cli::VERSION)?;
    m.add_class::<PyFluxConfig>()?;
    m.add_class::<PyMsLevel>()?;
    m.add_class::<PyLevel2D>()?;
    m.add_class::<PyDiracParams>()?;
    m.add_class::<PyDiracLevel>()?;
    m.add_function(wrap_pyfunction!(parse_angle, m)?)?;
    m.add_function(wrap_pyfunction!(ms_levels, m)?)?;
    m.add_function(wrap_pyfunction!(ms_spectrum_2d, m)?)?;
    m.add_function(wrap_pyfunction!(ab_bound_energy, m)?)?;
    m.add_function(wrap_pyfunction!(ab_continuum, m)?)?;
    m.add_function(wrap_pyfunction!(dirac_levels, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
