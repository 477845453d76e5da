//! Aharonov-Bohm setting: Bessel functions of real order and their zeros,
//! the quantum spectrum in a cylinder pierced by a thin solenoid, and the
//! cylindrical Liouvillian with its flux-shift invariance.

mod bessel;
mod cyl;

pub use bessel::{bessel_j, bessel_j_series, bessel_zero, bessel_zeros, gamma};
pub use cyl::{
    build_cyl_liouvillian, chain_rule_matrix, cyl_transform, d_phi, to_cartesian_expr, var, CylLiouvillian, CylState,
    RadialOperator,
};

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{KvnError, Result};
use crate::expr::Expr;
use crate::gauge::{couple_h, ChargedParticle, GaugeField};
use crate::testing::{random_point, random_polynomial};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AbParams {
    pub hbar: f64,
    pub mu: f64,
    /// outer radius of the cylinder
    pub b: f64,
    pub charge: f64,
    pub c_light: f64,
}

impl Default for AbParams {
    fn default() -> Self {
        AbParams { hbar: 1.0, mu: 1.0, b: 1.0, charge: 1.0, c_light: 1.0 }
    }
}

impl AbParams {
    /// α = eΦ_B/(ch), h = 2πħ
    pub fn flux_to_alpha(&self, flux: f64) -> f64 {
        self.charge * flux / (self.c_light * 2.0 * PI * self.hbar)
    }

    pub fn alpha_to_flux(&self, alpha: f64) -> f64 {
        alpha * self.c_light * 2.0 * PI * self.hbar / self.charge
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AbLevel {
    pub k: usize,
    pub m: i64,
    pub alpha: f64,
    pub order: f64,
    pub zero: f64,
    pub energy: f64,
}

/// E_{k,m} = ħ²α²_{k,ν}/(2μb²) + p_z0²/2μ with ν = |m − α| in the a → 0
/// cylinder (R(0) = 0, R(b) = 0).
pub fn ab_quantum_spectrum(k: usize, m: i64, alpha: f64, p_z0: f64, params: &AbParams) -> Result<AbLevel> {
    if !(params.hbar > 0.0) || !(params.mu > 0.0) || !(params.b > 0.0) {
        return Err(KvnError::InvalidParameter("ħ, μ and b must be positive".into()));
    }
    let order = (m as f64 - alpha).abs();
    if order == 0.0 {
        return Err(KvnError::InvalidParameter(format!(
            "order m − α = 0 gives J_0(0) = 1, which violates R(0) = 0 (m = {m}, α = {alpha})"
        )));
    }
    if k < 2 {
        return Err(KvnError::InvalidParameter("k = 1 is the zero at the origin and carries no level".into()));
    }
    let zero = bessel_zero(order, k)?;
    let energy = params.hbar * params.hbar * zero * zero / (2.0 * params.mu * params.b * params.b)
        + p_z0 * p_z0 / (2.0 * params.mu);
    Ok(AbLevel { k, m, alpha, order, zero, energy })
}

/// All admissible levels for m and k in the given ranges; orders equal to
/// zero are skipped.
pub fn ab_level_table(
    alpha: f64,
    ms: std::ops::RangeInclusive<i64>,
    ks: std::ops::RangeInclusive<usize>,
    p_z0: f64,
    params: &AbParams,
) -> Result<Vec<AbLevel>> {
    let mut out = Vec::new();
    for m in ms {
        if (m as f64 - alpha).abs() == 0.0 {
            continue;
        }
        for k in ks.clone() {
            out.push(ab_quantum_spectrum(k, m, alpha, p_z0, params)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AnnulusRoot {
    pub order: f64,
    pub k: usize,
    /// inner radius over outer radius
    pub ratio: f64,
    /// zero of J_ν at the outer wall
    pub zero: f64,
    /// J_ν(zero · a/b): what the J-only solution leaves at the inner wall
    pub inner_value: f64,
}

/// Finite inner radius with only J_ν kept: the outer condition fixes the
/// zero, and the inner condition R(a) = 0 is reported as a residual. It
/// vanishes as a/b → 0 for ν > 0 and stays O(1) otherwise, since meeting both
/// walls needs the Y_ν part that this model leaves out.
pub fn annulus_j_only(order: f64, k: usize, ratio: f64) -> Result<AnnulusRoot> {
    if !(0.0..1.0).contains(&ratio) {
        return Err(KvnError::InvalidParameter(format!("need 0 ≤ a/b < 1, got {ratio}")));
    }
    let zero = bessel_zero(order, k)?;
    let inner_value = bessel_j(order, zero * ratio)?;
    Ok(AnnulusRoot { order, k, ratio, zero, inner_value })
}

/// Cartesian Liouvillian of the particle in the solenoid field applied to g,
/// as the real factor L with ℋ̂g = −iL: L = Σ_a (∂_{p_a}H ∂_{q_a}g − ∂_{q_a}H ∂_{p_a}g).
pub fn cartesian_ab_action(mu: f64, flux: f64, charge: f64, c_light: f64, g: &Expr) -> Result<Expr> {
    let field = GaugeField::aharonov_bohm(flux, charge, c_light)?;
    let h = couple_h(&ChargedParticle::free(3, mu).hamiltonian(), &field);
    Ok(Expr::sum((0..3).map(|a| h.diff(3 + a) * g.diff(a) - h.diff(a) * g.diff(3 + a))))
}

/// Largest |ℋ̂_A f − ℋ̂_free(p_φ → p_φ − eΦ_B/2πc) f| over random polynomial
/// test functions and random points, with ℋ̂_A taken from the Cartesian
/// minimal coupling and mapped through the chain rule.
pub fn operator_shift_residual(flux: f64, mu: f64, charge: f64, c_light: f64, tests: usize, seed: u64) -> Result<f64> {
    let coupled = build_cyl_liouvillian(mu, flux, charge, c_light)?;
    let free_shifted = CylLiouvillian::free(mu).shifted(coupled.shift);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..tests {
        let f = random_polynomial(&mut rng, 7, 3, 6);
        let cart = cartesian_ab_action(mu, flux, charge, c_light, &to_cartesian_expr(&f))?;
        for _ in 0..3 {
            let p = random_point(&mut rng, &[(0.5, 2.0), (0.0, 2.0 * PI), (-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)]);
            let s = CylState { rho: p[0], phi: p[1], z: p[2], p_rho: p[3], p_phi: p[4], p_z: p[5] };
            let lhs = num_complex::Complex64::new(0.0, -cart.eval(&s.to_cartesian()));
            worst = worst.max((lhs - free_shifted.apply(&f, &s)).norm());
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceRow {
    pub flux: f64,
    pub alpha: f64,
    /// eΦ_B/2πc
    pub label_shift: f64,
    pub operator_residual: f64,
    /// free radial operator at label p_φ0 vs coupled one at p_φ0 + shift
    pub radial_residual: f64,
    pub argument: String,
}

const ARGUMENT: &str = "the coupled eigenfunction carries p_phi label p_phi0 + ePhi_B/2pi c and solves the same radial \
                        equation as the free one; p_phi0 is a continuous label that is integrated over in any state, \
                        so shifting it leaves the set of eigenvalues unchanged";

pub fn ab_classical_invariance_report(fluxes: &[f64], params: &AbParams, tests: usize, seed: u64) -> Result<Vec<InvarianceRow>> {
    let mut rows = Vec::new();
    for (i, &flux) in fluxes.iter().enumerate() {
        let coupled = build_cyl_liouvillian(params.mu, flux, params.charge, params.c_light)?;
        let free = CylLiouvillian::free(params.mu);
        let operator_residual =
            operator_shift_residual(flux, params.mu, params.charge, params.c_light, tests, seed + i as u64)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed ^ i as u64);
        let mut radial: f64 = 0.0;
        for _ in 0..tests {
            let r = random_polynomial(&mut rng, 2, 3, 5);
            let p = random_point(&mut rng, &[(0.5, 2.0), (-1.0, 1.0), (-2.0, 2.0), (-1.0, 1.0), (-1.0, 1.0)]);
            let n = (p[4] * 3.0).round() as i64;
            let a = free.radial(n, p[2], p[3], 0.7);
            let b = coupled.radial(n, p[2] + coupled.shift, p[3], 0.7);
            radial = radial.max((a.apply(&r, p[0], p[1]) - b.apply(&r, p[0], p[1])).norm());
        }
        rows.push(InvarianceRow {
            flux,
            alpha: params.flux_to_alpha(flux),
            label_shift: coupled.shift,
            operator_residual,
            radial_residual: radial,
            argument: ARGUMENT.into(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_errors() {
        let p = AbParams::default();
        assert!(ab_quantum_spectrum(1, 1, 0.0, 0.0, &p).is_err());
        assert!(ab_quantum_spectrum(2, 0, 0.0, 0.0, &p).is_err());
        assert!(ab_quantum_spectrum(2, 1, 1.0, 0.0, &p).is_err());
        let l = ab_quantum_spectrum(2, 1, 0.0, 0.0, &p).unwrap();
        assert!((l.energy - l.zero * l.zero / 2.0).abs() < 1e-15);
    }

    #[test]
    fn annulus_limit() {
        let small = annulus_j_only(1.0, 2, 1e-4).unwrap();
        assert!(small.inner_value.abs() < 1e-3);
        assert_eq!(annulus_j_only(1.0, 2, 0.0).unwrap().inner_value, 0.0);
        assert!(annulus_j_only(1.0, 2, 0.5).unwrap().inner_value.abs() > 0.1);
        assert!(annulus_j_only(1.0, 2, 1.0).is_err());
    }

    #[test]
    fn flux_alpha_round_trip() {
        let p = AbParams { hbar: 0.3, charge: 2.0, c_light: 5.0, ..Default::default() };
        assert!((p.flux_to_alpha(p.alpha_to_flux(0.1)) - 0.1).abs() < 1e-15);
    }
}
