//! Python bindings for kvn-core.

use kvn_core::aharonov::{self, AbParams};
use kvn_core::expr::parse;
use kvn_core::gauge::GaugeScenario;
use kvn_core::grid::{Axis, PhaseGrid, WaveFunction};
use kvn_core::liouville::{build_liouvillian, evolve_characteristics, evolve_spectral};
use kvn_core::spectra::{self, LandauParams};
use kvn_core::KvnError;
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: KvnError) -> PyErr {
    match e {
        KvnError::NonFinite { .. } | KvnError::ZeroSearch(_) => PyArithmeticError::new_err(e.to_string()),
        KvnError::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyfunction]
fn bessel_j(nu: f64, x: f64) -> PyResult<f64> {
    aharonov::bessel_j(nu, x).map_err(err)
}

/// k-th zero of J_ν; for ν > 0, k = 1 is the origin.
#[pyfunction]
fn bessel_zero(nu: f64, k: usize) -> PyResult<f64> {
    aharonov::bessel_zero(nu, k).map_err(err)
}

/// (order, zero, energy) of the thin-solenoid level (k, m) at flux α.
#[pyfunction]
#[pyo3(signature = (k, m, alpha, p_z0=0.0, hbar=1.0, mu=1.0, b=1.0))]
fn ab_level(k: usize, m: i64, alpha: f64, p_z0: f64, hbar: f64, mu: f64, b: f64) -> PyResult<(f64, f64, f64)> {
    let p = AbParams { hbar, mu, b, ..Default::default() };
    let l = aharonov::ab_quantum_spectrum(k, m, alpha, p_z0, &p).map_err(err)?;
    Ok((l.order, l.zero, l.energy))
}

/// Largest change of the classical cylindrical Liouvillian under the flux,
/// after the p_φ label shift.
#[pyfunction]
#[pyo3(signature = (flux, mu=1.0, charge=1.0, c_light=1.0, tests=50, seed=1))]
fn ab_shift_residual(flux: f64, mu: f64, charge: f64, c_light: f64, tests: usize, seed: u64) -> PyResult<f64> {
    aharonov::operator_shift_residual(flux, mu, charge, c_light, tests, seed).map_err(err)
}

/// (eigenvalue, grid residual) of the KvN oscillator state (N, n).
#[pyfunction]
#[pyo3(signature = (big_n, n=None, delta=1.0, mass=1.0, omega=1.0, grid=128))]
fn oscillator(big_n: i64, n: Option<u32>, delta: f64, mass: f64, omega: f64, grid: usize) -> PyResult<(f64, f64)> {
    let n = n.unwrap_or((-big_n).max(0) as u32);
    let p = spectra::kvn_oscillator(big_n, n, delta, mass, omega).map_err(err)?;
    let g = p.natural_grid(grid).map_err(err)?;
    Ok((p.eigenvalue, p.grid_residual(&g).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (n_max, p_z0=0.0, b=1.0, charge=1.0, mass=1.0, c_light=1.0, hbar=1.0))]
fn landau_quantum(n_max: u32, p_z0: f64, b: f64, charge: f64, mass: f64, c_light: f64, hbar: f64) -> PyResult<Vec<f64>> {
    let p = LandauParams { mass, charge, c_light, b, hbar };
    spectra::landau_spectrum_quantum(n_max, p_z0, &p).map_err(err)
}

/// (N, eigenvalue, independent labels, max residual) for N in lo..=hi.
#[pyfunction]
#[pyo3(signature = (lo, hi, lambda_z0=1.0, p_z0=0.5, b=1.0, charge=1.0, mass=1.0, c_light=1.0, delta=1.0, grid=64, tol=1e-6))]
#[allow(clippy::too_many_arguments)]
fn landau_kvn(
    lo: i64,
    hi: i64,
    lambda_z0: f64,
    p_z0: f64,
    b: f64,
    charge: f64,
    mass: f64,
    c_light: f64,
    delta: f64,
    grid: usize,
    tol: f64,
) -> PyResult<Vec<(i64, f64, usize, f64)>> {
    let p = LandauParams { mass, charge, c_light, b, hbar: 1.0 };
    let levels = spectra::landau_spectrum_kvn(lo..=hi, lambda_z0, p_z0, &p, delta, grid).map_err(err)?;
    Ok(levels
        .iter()
        .map(|l| (l.big_n, l.eigenvalue, l.certificate.independent_labels(tol), l.certificate.max_residual))
        .collect())
}

/// Runs a gauge scenario given as text and returns its residuals.
#[pyfunction]
fn gauge_check<'py>(py: Python<'py>, scenario: &str) -> PyResult<Bound<'py, PyDict>> {
    let r = GaugeScenario::parse(scenario).and_then(|s| s.run()).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("passed", r.passed)?;
    d.set_item("route_residual", r.route_residual)?;
    d.set_item("invariance_residual", r.invariance_residual)?;
    d.set_item("velocity_residual", r.velocity.max_residual)?;
    d.set_item("full_transform", r.velocity.max_full_transform)?;
    d.set_item("lorentz_residual", r.velocity.max_lorentz_residual)?;
    Ok(d)
}

/// Evolves a Gaussian density under H(q, p); returns the peak position and
/// the density as a list of rows over q.
#[pyfunction]
#[pyo3(signature = (hamiltonian, t, q0, p0, width=0.5, half=8.0, grid=128, dt=1e-3, method="spectral", steps=400))]
#[allow(clippy::too_many_arguments)]
fn evolve<'py>(
    py: Python<'py>,
    hamiltonian: &str,
    t: f64,
    q0: f64,
    p0: f64,
    width: f64,
    half: f64,
    grid: usize,
    dt: f64,
    method: &str,
    steps: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let h = parse(hamiltonian, &["q", "p"]).map_err(err)?;
    let axis = Axis::centered(half, grid).map_err(err)?;
    let g = PhaseGrid::qp(vec![axis, axis]).map_err(err)?;
    let init = move |x: &[f64]| {
        let r2 = (x[0] - q0).powi(2) + (x[1] - p0).powi(2);
        Complex64::new((-r2 / (4.0 * width * width)).exp(), 0.0)
    };
    let psi = match method {
        "spectral" => {
            let op = build_liouvillian(&h, &g).map_err(err)?;
            evolve_spectral(&op, &WaveFunction::from_fn(g.clone(), init), t, dt).map_err(err)?
        }
        "characteristics" => evolve_characteristics(&h, &init, &g, t, steps).map_err(err)?,
        _ => return Err(PyValueError::new_err(format!("unknown method '{method}'"))),
    };
    let rho = psi.density();
    let rows: Vec<Vec<f64>> = rho.chunks(grid).map(<[f64]>::to_vec).collect();
    let d = PyDict::new(py);
    d.set_item("peak", psi.peak())?;
    d.set_item("density", rows)?;
    d.set_item("dx", axis.dx())?;
    Ok(d)
}

#[pymodule]
fn kvn(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(bessel_j, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_zero, m)?)?;
    m.add_function(wrap_pyfunction!(ab_level, m)?)?;
    m.add_function(wrap_pyfunction!(ab_shift_residual, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator, m)?)?;
    m.add_function(wrap_pyfunction!(landau_quantum, m)?)?;
    m.add_function(wrap_pyfunction!(landau_kvn, m)?)?;
    m.add_function(wrap_pyfunction!(gauge_check, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    Ok(())
}
