//! Closed-form spectra and eigenfunctions: the KvN oscillator in the
//! (q, λ_p) representation and its polar form, and the Landau problem.

mod landau;

pub use landau::{
    landau_change_of_variables, landau_change_of_variables_inverse, landau_reduction_residual, landau_spectrum_kvn,
    landau_spectrum_quantum, CertificateMember, DegeneracyCertificate, KvnLandauLevel, LandauKvnState, LandauParams,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{KvnError, Result};
use crate::expr::Expr;
use crate::grid::{Axis, PhaseGrid, WaveFunction};
use crate::liouville::{build_liouvillian, GridOperator, MixedOperator};

/// Normalised Hermite functions h_0..=h_n at u (∫h_k² du = 1), by the
/// three-term recurrence.
pub fn hermite_functions(n: usize, u: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n + 1);
    h.push(PI.powf(-0.25) * (-u * u / 2.0).exp());
    if n >= 1 {
        h.push(2f64.sqrt() * u * h[0]);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * h[k] - (kf / (kf + 1.0)).sqrt() * h[k - 1];
        h.push(next);
    }
    h
}

/// Oscillator eigenfunction ψ_n(x) with width σ, normalised in x.
pub fn oscillator_function(n: usize, x: f64, sigma: f64) -> f64 {
    hermite_functions(n, x / sigma)[n] / sigma.sqrt()
}

/// Eigenpair of ℋ̂ = (1/m)∂_q∂_{λ_p} − mω²λ_p q labelled by N and n:
/// ψ = ψ_n(Z_+)ψ_{n+N}(Z_−), Z_± = (q ± Δλ_p)/√2, σ0 = √(Δ/mω), Ẽ = Nω.
#[derive(Clone, Debug, Serialize)]
pub struct OscillatorEigenpair {
    pub big_n: i64,
    pub n: u32,
    pub delta: f64,
    pub mass: f64,
    pub omega: f64,
    pub eigenvalue: f64,
}

pub fn kvn_oscillator(big_n: i64, n: u32, delta: f64, mass: f64, omega: f64) -> Result<OscillatorEigenpair> {
    if !(delta > 0.0) || !(mass > 0.0) || !(omega > 0.0) {
        return Err(KvnError::InvalidParameter("Δ, m and ω must be positive".into()));
    }
    let n_min = (-big_n).max(0);
    if (n as i64) < n_min {
        return Err(KvnError::InvalidParameter(format!("n must be at least {n_min} for N = {big_n}, got {n}")));
    }
    Ok(OscillatorEigenpair { big_n, n, delta, mass, omega, eigenvalue: big_n as f64 * omega })
}

/// Ẽ = Nω for each N in the range.
pub fn oscillator_spectrum(range: std::ops::RangeInclusive<i64>, omega: f64) -> Vec<(i64, f64)> {
    range.map(|k| (k, k as f64 * omega)).collect()
}

impl OscillatorEigenpair {
    pub fn sigma(&self) -> f64 {
        (self.delta / (self.mass * self.omega)).sqrt()
    }

    pub fn m_index(&self) -> usize {
        (self.n as i64 + self.big_n) as usize
    }

    pub fn value(&self, q: f64, lam: f64) -> f64 {
        let s = self.sigma();
        let zp = (q + self.delta * lam) / 2f64.sqrt();
        let zm = (q - self.delta * lam) / 2f64.sqrt();
        oscillator_function(self.n as usize, zp, s) * oscillator_function(self.m_index(), zm, s)
    }

    /// Mixed grid scaled to the eigenfunction: q over ±12σ0, λ_p over ±12σ0/Δ.
    pub fn natural_grid(&self, count: usize) -> Result<PhaseGrid> {
        let top = self.n.max(self.m_index() as u32) as f64;
        let half = (12.0f64).max(2.0 * (2.0 * top + 1.0).sqrt() + 6.0) * self.sigma();
        PhaseGrid::mixed(vec![Axis::centered(half, count)?, Axis::centered(half / self.delta, count)?])
    }

    pub fn wavefunction(&self, grid: &PhaseGrid) -> Result<WaveFunction> {
        if grid.n != 1 {
            return Err(KvnError::Dimension("oscillator eigenfunctions live on a 1-d mixed grid".into()));
        }
        grid.require(crate::grid::Representation::QLambdaP)?;
        Ok(WaveFunction::from_fn(grid.clone(), |x| Complex64::new(self.value(x[0], x[1]), 0.0)))
    }

    pub fn operator(&self, grid: &PhaseGrid) -> Result<MixedOperator> {
        let w = -(Expr::var(0) * Expr::var(1)) * (self.mass * self.omega * self.omega);
        Ok(MixedOperator::free(grid, self.mass)?.with_multiplier(&w).with_source("oscillator"))
    }

    /// ‖ℋ̂ψ − Ẽψ‖/‖ψ‖ on the grid.
    pub fn grid_residual(&self, grid: &PhaseGrid) -> Result<f64> {
        let psi = self.wavefunction(grid)?;
        let h = self.operator(grid)?.apply(&psi)?;
        Ok(h.distance(&psi.scale(Complex64::new(self.eigenvalue, 0.0))) / psi.norm())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolarReport {
    pub big_n: f64,
    pub omega: f64,
    pub eigenvalue: f64,
    /// ‖ℋ̂ψ − Nωψ‖/‖ψ‖ with ℋ̂ = −i(p/m ∂_q − mω²q ∂_p) on a (q, p) grid
    pub residual: f64,
    /// |e^{−2πiN} − 1|
    pub winding_defect: f64,
    pub single_valued: bool,
}

/// Sample F(r)e^{−iNθ} with √m ω q = r cos θ, p/√m = r sin θ, θ ∈ [0, 2π),
/// F = r^{|N|}e^{−r²/2}, apply the Cartesian Liouvillian on a grid and
/// compare with Nω. Non-integer N leaves a cut along θ = 0, which spoils the
/// residual and is reported through the winding defect.
pub fn oscillator_polar_check(big_n: f64, mass: f64, omega: f64, count: usize) -> Result<PolarReport> {
    if !(mass > 0.0) || !(omega > 0.0) {
        return Err(KvnError::InvalidParameter("m and ω must be positive".into()));
    }
    let rmax = 9.0 + big_n.abs().sqrt() * 2.0;
    let qh = rmax / (mass.sqrt() * omega);
    let ph = rmax * mass.sqrt();
    let grid = PhaseGrid::qp(vec![Axis::centered(qh, count)?, Axis::centered(ph, count)?])?;
    let h = (Expr::var(1).sq() / (2.0 * mass)) + Expr::var(0).sq() * (0.5 * mass * omega * omega);
    let op = build_liouvillian(&h, &grid)?;
    let a = big_n.abs();
    let psi = WaveFunction::from_fn(grid.clone(), |x| {
        let u = mass.sqrt() * omega * x[0];
        let v = x[1] / mass.sqrt();
        let r = u.hypot(v);
        let theta = v.atan2(u).rem_euclid(2.0 * PI);
        Complex64::from_polar(r.powf(a) * (-r * r / 2.0).exp(), -big_n * theta)
    });
    let eigenvalue = big_n * omega;
    let res = op.apply(&psi)?.distance(&psi.scale(Complex64::new(eigenvalue, 0.0))) / psi.norm();
    let winding_defect = (Complex64::from_polar(1.0, -2.0 * PI * big_n) - 1.0).norm();
    Ok(PolarReport { big_n, omega, eigenvalue, residual: res, winding_defect, single_valued: winding_defect < 1e-12 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_orthonormal() {
        let (a, b, steps) = (-12.0, 12.0, 4000);
        let du = (b - a) / steps as f64;
        let mut gram = [[0.0; 6]; 6];
        for s in 0..steps {
            let h = hermite_functions(5, a + (s as f64 + 0.5) * du);
            for i in 0..6 {
                for j in 0..6 {
                    gram[i][j] += h[i] * h[j] * du;
                }
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((gram[i][j] - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn hermite_matches_polynomial_form() {
        // H_3(u) = 8u³ − 12u, norm (√π 2³ 3!)^{-1/2}
        let u: f64 = 0.7;
        let want = (8.0 * u.powi(3) - 12.0 * u) * (-u * u / 2.0).exp() / (PI.sqrt() * 48.0).sqrt();
        assert!((hermite_functions(3, u)[3] - want).abs() < 1e-14);
        assert!(hermite_functions(60, 3.0).iter().all(|v| v.is_finite()));
    }

    #[test]
    fn admissible_n() {
        assert!(kvn_oscillator(-2, 1, 1.0, 1.0, 1.0).is_err());
        assert!(kvn_oscillator(-2, 2, 1.0, 1.0, 1.0).is_ok());
        assert_eq!(kvn_oscillator(0, 0, 1.0, 1.0, 1.0).unwrap().eigenvalue, 0.0);
    }
}
