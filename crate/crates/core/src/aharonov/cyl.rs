use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{KvnError, Result};
use crate::expr::Expr;

/// Cylindrical phase-space point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylState {
    pub rho: f64,
    pub phi: f64,
    pub z: f64,
    pub p_rho: f64,
    pub p_phi: f64,
    pub p_z: f64,
}

/// (x, y, z, p_x, p_y, p_z) → (ρ, φ, z, p_ρ, p_φ, p_z) with φ ∈ [0, 2π),
/// p_ρ = (x p_x + y p_y)/ρ and p_φ = x p_y − y p_x.
pub fn cyl_transform(cart: &[f64; 6]) -> Result<CylState> {
    let [x, y, z, px, py, pz] = *cart;
    let rho = x.hypot(y);
    if !(rho > 0.0) {
        return Err(KvnError::Singular("cylindrical coordinates are singular on the axis ρ = 0".into()));
    }
    Ok(CylState {
        rho,
        phi: y.atan2(x).rem_euclid(2.0 * PI),
        z,
        p_rho: (x * px + y * py) / rho,
        p_phi: x * py - y * px,
        p_z: pz,
    })
}

impl CylState {
    pub fn to_cartesian(&self) -> [f64; 6] {
        let (s, c) = self.phi.sin_cos();
        [
            self.rho * c,
            self.rho * s,
            self.z,
            self.p_rho * c - self.p_phi / self.rho * s,
            self.p_rho * s + self.p_phi / self.rho * c,
            self.p_z,
        ]
    }

    /// Variables of a cylindrical test function: (ρ, cos φ, sin φ, z, p_ρ, p_φ, p_z).
    pub fn test_vars(&self) -> [f64; 7] {
        let (s, c) = self.phi.sin_cos();
        [self.rho, c, s, self.z, self.p_rho, self.p_phi, self.p_z]
    }
}

/// Rows ∂_x, ∂_y, ∂_{p_x}, ∂_{p_y}; columns ∂_ρ, ∂_φ, ∂_{p_ρ}, ∂_{p_φ}.
pub fn chain_rule_matrix(s: &CylState) -> Result<[[f64; 4]; 4]> {
    if !(s.rho > 0.0) {
        return Err(KvnError::Singular("chain-rule matrix is singular at ρ = 0".into()));
    }
    let (sn, c) = s.phi.sin_cos();
    let (r, pr, pp) = (s.rho, s.p_rho, s.p_phi);
    Ok([
        [c, -sn / r, -pp * sn / (r * r), pp / r * c + pr * sn],
        [sn, c / r, pp * c / (r * r), pp / r * sn - pr * c],
        [0.0, 0.0, c, -r * sn],
        [0.0, 0.0, sn, r * c],
    ])
}

/// Index of each variable in a cylindrical test-function expression.
pub mod var {
    pub const RHO: usize = 0;
    pub const COS: usize = 1;
    pub const SIN: usize = 2;
    pub const Z: usize = 3;
    pub const P_RHO: usize = 4;
    pub const P_PHI: usize = 5;
    pub const P_Z: usize = 6;
}

/// ∂f/∂φ for f over (ρ, cos φ, sin φ, …).
pub fn d_phi(f: &Expr) -> Expr {
    -(Expr::var(var::SIN) * f.diff(var::COS)) + Expr::var(var::COS) * f.diff(var::SIN)
}

/// The cylindrical test function rewritten over (x, y, z, p_x, p_y, p_z).
pub fn to_cartesian_expr(f: &Expr) -> Expr {
    let (x, y, z) = (Expr::var(0), Expr::var(1), Expr::var(2));
    let (px, py, pz) = (Expr::var(3), Expr::var(4), Expr::var(5));
    let rho = (x.sq() + y.sq()).sqrt();
    f.substitute_slice(&[
        rho.clone(),
        x.clone() / rho.clone(),
        y.clone() / rho.clone(),
        z,
        (x.clone() * px.clone() + y.clone() * py.clone()) / rho,
        x * py - y * px,
        pz,
    ])
}

/// ℋ̂ = −(i/μ)[p_ρ∂_ρ + (p_φ − s)/ρ² ∂_φ + p_z∂_z + (p_φ − s)²/ρ³ ∂_{p_ρ}],
/// s = eΦ_B/2πc (s = 0 is the free operator).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CylLiouvillian {
    pub mu: f64,
    pub shift: f64,
}

/// Cylindrical Liouvillian for reduced mass μ and flux Φ_B.
pub fn build_cyl_liouvillian(mu: f64, flux: f64, charge: f64, c_light: f64) -> Result<CylLiouvillian> {
    if !(mu > 0.0) || !(c_light > 0.0) {
        return Err(KvnError::InvalidParameter("μ and c must be positive".into()));
    }
    Ok(CylLiouvillian { mu, shift: charge * flux / (2.0 * PI * c_light) })
}

impl CylLiouvillian {
    pub fn free(mu: f64) -> Self {
        CylLiouvillian { mu, shift: 0.0 }
    }

    /// The same operator with its p_φ coefficient replaced by p_φ − `by`.
    pub fn shifted(&self, by: f64) -> Self {
        CylLiouvillian { mu: self.mu, shift: self.shift + by }
    }

    /// (ℋ̂f)(s) for a real test function f over (ρ, cos φ, sin φ, z, p_ρ, p_φ, p_z).
    pub fn apply(&self, f: &Expr, s: &CylState) -> Complex64 {
        let v = s.test_vars();
        let l = s.p_phi - self.shift;
        let r = s.rho;
        let sum = s.p_rho * f.diff(var::RHO).eval(&v)
            + l / (r * r) * d_phi(f).eval(&v)
            + s.p_z * f.diff(var::Z).eval(&v)
            + l * l / (r * r * r) * f.diff(var::P_RHO).eval(&v);
        Complex64::new(0.0, -sum / self.mu)
    }

    /// Radial sector for ψ = R(ρ, p_ρ) δ(p_φ − label) δ(p_z − p_z0) e^{inφ} e^{iλ_z0 z}/2π.
    pub fn radial(&self, n: i64, p_phi_label: f64, lambda_z0: f64, p_z0: f64) -> RadialOperator {
        RadialOperator { mu: self.mu, p_phi: p_phi_label - self.shift, n, lambda_z0, p_z0 }
    }
}

/// (−i/μ)p_ρ∂_ρ + p_φ n/(μρ²) − (i/μρ³)p_φ²∂_{p_ρ} + λ_z0 p_z0/μ, where p_φ
/// is the label seen by the operator after any flux shift.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RadialOperator {
    pub mu: f64,
    pub p_phi: f64,
    pub n: i64,
    pub lambda_z0: f64,
    pub p_z0: f64,
}

impl RadialOperator {
    /// Action on a real R over (ρ, p_ρ) at one point.
    pub fn apply(&self, r_fn: &Expr, rho: f64, p_rho: f64) -> Complex64 {
        let v = [rho, p_rho];
        let f = r_fn.eval(&v);
        let re = (self.p_phi * self.n as f64 / (rho * rho) + self.lambda_z0 * self.p_z0) * f / self.mu;
        let im = -(p_rho * r_fn.diff(0).eval(&v) + self.p_phi * self.p_phi / rho.powi(3) * r_fn.diff(1).eval(&v)) / self.mu;
        Complex64::new(re, im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_zero_reading() {
        let s = CylState { rho: 2.0, phi: 0.0, z: 0.5, p_rho: 0.3, p_phi: 1.4, p_z: -1.0 };
        let c = s.to_cartesian();
        assert_eq!(c[0], 2.0);
        assert_eq!(c[3], 0.3);
        assert!((c[4] - 0.7).abs() < 1e-15);
        assert!(cyl_transform(&[0.0, 0.0, 1.0, 1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn round_trip() {
        let cart = [0.3, -1.2, 0.4, 0.9, -0.1, 2.0];
        let back = cyl_transform(&cart).unwrap().to_cartesian();
        for i in 0..6 {
            assert!((back[i] - cart[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn momentum_block_determinant_is_rho() {
        let s = CylState { rho: 1.7, phi: 2.1, z: 0.0, p_rho: 0.4, p_phi: -0.8, p_z: 0.0 };
        let m = chain_rule_matrix(&s).unwrap();
        assert!((m[2][2] * m[3][3] - m[2][3] * m[3][2] - 1.7).abs() < 1e-14);
        assert!(chain_rule_matrix(&CylState { rho: 0.0, ..s }).is_err());
    }
}
