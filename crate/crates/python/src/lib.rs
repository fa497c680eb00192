//! Python bindings: chains, the quasi-harmonic transform, coupling analysis,
//! integration and the sweep. Results cross the boundary as lists and dicts.

use std::path::PathBuf;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use altchain::coupling::{self, PRESENCE_TAU};
use altchain::dynamics::{self, Dynamics, IntegratorConfig, Trajectory};
use altchain::spectral::{self, QuasiHarmonicSystem};
use altchain::{io, sweep, ChainParams, FullChainSystem, FullState, ModeKind, ReducedSystem};

fn err(e: altchain::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn config(t_end: f64, tol: f64, sample_dt: f64) -> IntegratorConfig {
    IntegratorConfig::new(t_end).with_tol(tol).with_sample_dt(sample_dt)
}

fn run(sys: &dyn Dynamics, x0: Vec<f64>, v0: Vec<f64>, cfg: &IntegratorConfig) -> PyResult<PyTrajectory> {
    cfg.validate().map_err(err)?;
    let tr = dynamics::integrate(sys, &x0, &v0, cfg).map_err(err)?;
    let drift = dynamics::energy_drift(sys, &tr);
    Ok(PyTrajectory { inner: tr, drift })
}

/// Periodic alternating-mass chain of `2 * n_pairs` particles.
#[pyclass(name = "Chain", frozen)]
struct PyChain {
    inner: FullChainSystem,
}

#[pymethods]
impl PyChain {
    #[new]
    #[pyo3(signature = (n_pairs, a, alpha=1.0))]
    fn new(n_pairs: usize, a: f64, alpha: f64) -> PyResult<Self> {
        Ok(Self { inner: altchain::build_chain(ChainParams::new(n_pairs, a, alpha)).map_err(err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn accel(&self, q: Vec<f64>, v: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.eval_accel(&FullState { q, v }).map_err(err)
    }

    fn hamiltonian(&self, q: Vec<f64>, v: Vec<f64>) -> PyResult<f64> {
        self.inner.hamiltonian(&FullState { q, v }).map_err(err)
    }

    /// Squared linear frequencies, descending.
    fn linear_spectrum(&self) -> Vec<f64> {
        self.inner.linear_spectrum()
    }

    #[pyo3(signature = (q, v, t_end, tol=1e-10, sample_dt=1.0))]
    fn integrate(&self, q: Vec<f64>, v: Vec<f64>, t_end: f64, tol: f64, sample_dt: f64) -> PyResult<PyTrajectory> {
        run(&self.inner, q, v, &config(t_end, tol, sample_dt))
    }
}

/// Symmetric fixed-end chain with `p - 1` degrees of freedom.
#[pyclass(name = "ReducedChain", frozen)]
struct PyReduced {
    inner: ReducedSystem,
}

#[pymethods]
impl PyReduced {
    #[new]
    #[pyo3(signature = (p, a, alpha=1.0))]
    fn new(p: usize, a: f64, alpha: f64) -> PyResult<Self> {
        Ok(Self { inner: altchain::build_reduced(p, a, alpha).map_err(err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn masses(&self) -> Vec<f64> {
        self.inner.masses.clone()
    }

    fn accel(&self, q: Vec<f64>, v: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.eval_accel(&altchain::ReducedState::new(q, v)).map_err(err)
    }

    fn energy(&self, q: Vec<f64>, v: Vec<f64>) -> PyResult<f64> {
        self.inner.energy(&altchain::ReducedState::new(q, v)).map_err(err)
    }

    /// Equilibria in the box `[-half_width, half_width]^dim`, as dicts.
    #[pyo3(signature = (half_width=4.0, grid=9))]
    fn equilibria<'py>(&self, py: Python<'py>, half_width: f64, grid: usize) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let reports = dynamics::find_equilibria(&self.inner, half_width, grid).map_err(err)?;
        reports
            .into_iter()
            .map(|r| {
                let d = PyDict::new(py);
                d.set_item("point", r.point)?;
                d.set_item("residual", r.residual)?;
                d.set_item("eigenvalues", r.eigenvalues.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>())?;
                d.set_item("positive_real", r.positive_real)?;
                d.set_item("pure_imaginary", r.pure_imaginary)?;
                Ok(d)
            })
            .collect()
    }

    #[pyo3(signature = (q, v, t_end, tol=1e-10, sample_dt=1.0))]
    fn integrate(&self, q: Vec<f64>, v: Vec<f64>, t_end: f64, tol: f64, sample_dt: f64) -> PyResult<PyTrajectory> {
        run(&self.inner, q, v, &config(t_end, tol, sample_dt))
    }
}

/// Normal-mode form `ẍ_i + λ_i x_i = α Σ C_ijk x_j x_k`.
#[pyclass(name = "QuasiHarmonic", frozen)]
struct PyQuasiHarmonic {
    inner: QuasiHarmonicSystem,
}

#[pymethods]
impl PyQuasiHarmonic {
    #[new]
    #[pyo3(signature = (p, a, alpha=1.0))]
    fn new(p: usize, a: f64, alpha: f64) -> PyResult<Self> {
        Ok(Self { inner: spectral::quasi_harmonic(p, a, alpha).map_err(err)?.2 })
    }

    /// Read a system table file.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Self { inner: io::read_system(&path).map_err(err)? })
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p
    }

    #[getter]
    fn lambdas(&self) -> Vec<f64> {
        self.inner.lambdas.clone()
    }

    /// `(kind, pair)` per mode, kind being "acoustic" or "optical".
    #[getter]
    fn labels(&self) -> Vec<(&'static str, usize)> {
        let kind = |k: ModeKind| if k == ModeKind::Acoustic { "acoustic" } else { "optical" };
        self.inner.labels.iter().map(|l| (kind(l.kind), l.pair)).collect()
    }

    /// Nonzero coupling entries `(i, j, k, C_ijk)` with `j <= k`.
    fn coupling(&self) -> Vec<(usize, usize, usize, f64)> {
        self.inner.coupling.entries().collect()
    }

    fn rhs(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        spectral::eval_qh_rhs(&self.inner, &x, self.inner.alpha).map_err(err)
    }

    fn to_text(&self) -> String {
        io::format_system(&self.inner)
    }

    /// Forcing squares, cycles, invariant manifolds and containments.
    #[pyo3(signature = (tau=PRESENCE_TAU))]
    fn analyze<'py>(&self, py: Python<'py>, tau: f64) -> PyResult<Bound<'py, PyDict>> {
        let an = coupling::analyze(&self.inner, tau).map_err(err)?;
        let n = self.inner.dim();
        let d = PyDict::new(py);
        d.set_item("rho", an.squares.rho.images().to_vec())?;
        d.set_item("cycles", an.cycles.cycles.clone())?;
        d.set_item("excitation", an.squares.excitation_map().images().to_vec())?;
        d.set_item("jan_agrees", an.jan_agrees())?;
        d.set_item("interaction", an.squares.interaction_verdict())?;
        d.set_item("invariant", an.invariant_manifolds().iter().map(|c| c.kept(n)).collect::<Vec<_>>())?;
        d.set_item("containments", an.containments.clone())?;
        Ok(d)
    }

    /// Subsystem on the kept modes (must be invariant).
    #[pyo3(signature = (kept, tau=PRESENCE_TAU))]
    fn extract(&self, kept: Vec<usize>, tau: f64) -> PyResult<Self> {
        Ok(Self { inner: coupling::extract_subsystem(&self.inner, &kept, tau).map_err(err)? })
    }

    /// Match against `reference` up to mode order and per-mode scaling.
    #[pyo3(signature = (reference, tau=PRESENCE_TAU))]
    fn fit<'py>(&self, py: Python<'py>, reference: &Self, tau: f64) -> PyResult<Bound<'py, PyDict>> {
        let f = coupling::scaling_equivalence(&self.inner, &reference.inner, tau).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("order", f.order)?;
        d.set_item("scales", f.scales)?;
        d.set_item("residual", f.residual)?;
        d.set_item("lambda_mismatch", f.lambda_mismatch)?;
        Ok(d)
    }

    #[pyo3(signature = (x, v, t_end, tol=1e-10, sample_dt=1.0))]
    fn integrate(&self, x: Vec<f64>, v: Vec<f64>, t_end: f64, tol: f64, sample_dt: f64) -> PyResult<PyTrajectory> {
        run(&self.inner, x, v, &config(t_end, tol, sample_dt))
    }
}

#[pyclass(name = "Trajectory", frozen)]
struct PyTrajectory {
    inner: Trajectory,
    drift: Option<f64>,
}

#[pymethods]
impl PyTrajectory {
    #[getter]
    fn times(&self) -> Vec<f64> {
        self.inner.times.clone()
    }

    /// Positions per sample.
    #[getter]
    fn positions(&self) -> Vec<Vec<f64>> {
        (0..self.inner.len()).map(|k| self.inner.position(k).to_vec()).collect()
    }

    #[getter]
    fn velocities(&self) -> Vec<Vec<f64>> {
        (0..self.inner.len()).map(|k| self.inner.velocity(k).to_vec()).collect()
    }

    #[getter]
    fn completed(&self) -> bool {
        self.inner.termination.is_completed()
    }

    #[getter]
    fn termination(&self) -> String {
        self.inner.termination.describe()
    }

    /// Maximum relative energy drift, when the energy is defined.
    #[getter]
    fn energy_drift(&self) -> Option<f64> {
        self.drift
    }

    fn series(&self, i: usize) -> PyResult<Vec<f64>> {
        if i >= self.inner.dim {
            return Err(PyValueError::new_err(format!("coordinate {i} out of range (dim {})", self.inner.dim)));
        }
        Ok(self.inner.series(i))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Acoustic and optical eigenvalue of pair `j` in closed form.
#[pyfunction]
fn pair_eigenvalues(a: f64, p: usize, j: usize) -> PyResult<(f64, f64)> {
    altchain::pair_eigenvalues(a, p, j).map_err(err)
}

/// Coupling analysis for odd `p` up to `p_max`; returns (passed, report text).
#[pyfunction]
#[pyo3(signature = (p_max, a=0.01))]
fn run_sweep(py: Python<'_>, p_max: usize, a: f64) -> PyResult<(bool, String)> {
    let report = py.detach(|| sweep::sweep(p_max, a, &[])).map_err(err)?;
    Ok((report.passed(), sweep::format_sweep(&report)))
}

#[pymodule]
fn altchain_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChain>()?;
    m.add_class::<PyReduced>()?;
    m.add_class::<PyQuasiHarmonic>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_function(wrap_pyfunction!(pair_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add("PRESENCE_TAU", PRESENCE_TAU)?;
    Ok(())
}
