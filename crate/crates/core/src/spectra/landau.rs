use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::oscillator_function;
use crate::error::{KvnError, Result};
use crate::expr::Expr;
use crate::grid::{Axis, PhaseGrid, Representation, WaveFunction};
use crate::liouville::{GridOperator, MixedOperator};

/// Charged particle in a uniform field B along z.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LandauParams {
    pub mass: f64,
    pub charge: f64,
    pub c_light: f64,
    pub b: f64,
    pub hbar: f64,
}

impl Default for LandauParams {
    fn default() -> Self {
        LandauParams { mass: 1.0, charge: 1.0, c_light: 1.0, b: 1.0, hbar: 1.0 }
    }
}

impl LandauParams {
    /// ω = eB/mc
    pub fn omega(&self) -> f64 {
        self.charge * self.b / (self.mass * self.c_light)
    }

    /// eB/c
    pub fn eb_c(&self) -> f64 {
        self.charge * self.b / self.c_light
    }

    fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0) || !(self.c_light > 0.0) || !(self.hbar > 0.0) {
            return Err(KvnError::InvalidParameter("m, c and ħ must be positive".into()));
        }
        if !(self.omega() > 0.0) {
            return Err(KvnError::InvalidParameter("need eB/c > 0".into()));
        }
        Ok(())
    }
}

/// E = (eħB/mc)(n + 1/2) + p_z0²/2m for n = 0..=n_max. B = 0 gives the free
/// longitudinal energy for every n.
pub fn landau_spectrum_quantum(n_max: u32, p_z0: f64, params: &LandauParams) -> Result<Vec<f64>> {
    if !(params.mass > 0.0) || !(params.c_light > 0.0) || !(params.hbar > 0.0) {
        return Err(KvnError::InvalidParameter("m, c and ħ must be positive".into()));
    }
    let spacing = params.hbar * params.omega();
    Ok((0..=n_max).map(|n| spacing * (n as f64 + 0.5) + p_z0 * p_z0 / (2.0 * params.mass)).collect())
}

/// x' = x − (c/eB)p_y0, λ' = λ_{p_x} + (c/eB)λ_y0.
pub fn landau_change_of_variables(x: f64, lambda_px: f64, p_y0: f64, lambda_y0: f64, params: &LandauParams) -> (f64, f64) {
    let k = params.eb_c();
    (x - p_y0 / k, lambda_px + lambda_y0 / k)
}

pub fn landau_change_of_variables_inverse(
    x_prime: f64,
    lambda_prime: f64,
    p_y0: f64,
    lambda_y0: f64,
    params: &LandauParams,
) -> (f64, f64) {
    let k = params.eb_c();
    (x_prime + p_y0 / k, lambda_prime - lambda_y0 / k)
}

/// Apply the reduced operator
/// (1/m)∂_x∂_λ + (1/m)(λ_y0 + (eB/c)λ)(p_y0 − (eB/c)x)
/// to f(x, λ) = g(x', λ') and the oscillator form
/// (1/m)∂_{x'}∂_{λ'} − mω²λ'x' to g, pointwise at each point; return the
/// largest difference. `g` is an expression over (x', λ').
pub fn landau_reduction_residual(
    g: &Expr,
    points: &[[f64; 2]],
    p_y0: f64,
    lambda_y0: f64,
    params: &LandauParams,
) -> Result<f64> {
    params.validate()?;
    let k = params.eb_c();
    let m = params.mass;
    let w = params.omega();
    let (x, l) = (Expr::var(0), Expr::var(1));
    let f = g.substitute_slice(&[x.clone() - p_y0 / k, l.clone() + lambda_y0 / k]);
    let lhs = f.diff(0).diff(1) / m + (l * k + lambda_y0) * (-(x * k) + p_y0) * f.clone() / m;
    let rhs = g.diff(0).diff(1) / m - Expr::var(0) * Expr::var(1) * g.clone() * (m * w * w);
    let mut worst: f64 = 0.0;
    for p in points {
        let (xp, lp) = landau_change_of_variables(p[0], p[1], p_y0, lambda_y0, params);
        worst = worst.max((lhs.eval(p) - rhs.eval(&[xp, lp])).abs());
    }
    Ok(worst)
}

/// KvN Landau eigenstate with labels (N, n, λ_y0, p_y0, λ_z0, p_z0) and
/// representation constant Δ.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LandauKvnState {
    pub big_n: i64,
    pub n: u32,
    pub lambda_y0: f64,
    pub p_y0: f64,
    pub lambda_z0: f64,
    pub p_z0: f64,
    pub delta: f64,
}

impl LandauKvnState {
    pub fn new(big_n: i64, n: u32, lambda_y0: f64, p_y0: f64, lambda_z0: f64, p_z0: f64, delta: f64) -> Result<Self> {
        if (n as i64) < (-big_n).max(0) {
            return Err(KvnError::InvalidParameter(format!("n must be at least {} for N = {big_n}", -big_n)));
        }
        if !(delta > 0.0) {
            return Err(KvnError::InvalidParameter("Δ must be positive".into()));
        }
        Ok(LandauKvnState { big_n, n, lambda_y0, p_y0, lambda_z0, p_z0, delta })
    }

    /// Ẽ = Nω + λ_z0 p_z0/m
    pub fn eigenvalue(&self, params: &LandauParams) -> f64 {
        self.big_n as f64 * params.omega() + self.lambda_z0 * self.p_z0 / params.mass
    }

    fn sigma(&self, params: &LandauParams) -> f64 {
        (self.delta / (params.mass * params.omega())).sqrt()
    }

    /// ψ(x, λ_{p_x}) = ψ_n(Z'_+)ψ_{n+N}(Z'_−) with Z'_± = (x' ± Δλ')/√2.
    pub fn reduced_value(&self, x: f64, lam: f64, params: &LandauParams) -> f64 {
        let (xp, lp) = landau_change_of_variables(x, lam, self.p_y0, self.lambda_y0, params);
        let s = self.sigma(params);
        let zp = (xp + self.delta * lp) / 2f64.sqrt();
        let zm = (xp - self.delta * lp) / 2f64.sqrt();
        oscillator_function(self.n as usize, zp, s) * oscillator_function((self.n as i64 + self.big_n) as usize, zm, s)
    }

    /// Full eigenfunction at (x, y, z, λ_x, λ_y, λ_z):
    /// (2π)^{-2} e^{i(λ_y0 y − λ_{p_y} p_y0)} e^{i(λ_z0 z − λ_{p_z} p_z0)} ψ(x, λ_{p_x}).
    pub fn value(&self, x: &[f64], params: &LandauParams) -> Complex64 {
        let phase = self.lambda_y0 * x[1] - x[4] * self.p_y0 + self.lambda_z0 * x[2] - x[5] * self.p_z0;
        Complex64::from_polar(self.reduced_value(x[0], x[3], params) / (4.0 * PI * PI), phase)
    }

    /// 1-d mixed grid centred on the shifted oscillator.
    pub fn reduced_grid(&self, params: &LandauParams, count: usize) -> Result<PhaseGrid> {
        params.validate()?;
        let k = params.eb_c();
        let top = self.n as f64 + self.big_n.max(0) as f64;
        let half = 12.0f64.max(2.0 * (2.0 * top + 1.0).sqrt() + 6.0) * self.sigma(params);
        let (xc, lc) = (self.p_y0 / k, -self.lambda_y0 / k);
        let lh = half / self.delta;
        PhaseGrid::mixed(vec![Axis::new(xc - half, xc + half, count)?, Axis::new(lc - lh, lc + lh, count)?])
    }

    /// The operator on ψ(x, λ_{p_x}) after the plane-wave factors are divided out.
    pub fn reduced_operator(&self, params: &LandauParams, grid: &PhaseGrid) -> Result<MixedOperator> {
        params.validate()?;
        let k = params.eb_c();
        let m = params.mass;
        let w = (Expr::var(1) * k + self.lambda_y0) * (-(Expr::var(0) * k) + self.p_y0) / m
            + Expr::constant(self.lambda_z0 * self.p_z0 / m);
        Ok(MixedOperator::free(grid, m)?.with_multiplier(&w).with_source("reduced Landau"))
    }

    pub fn reduced_wavefunction(&self, params: &LandauParams, grid: &PhaseGrid) -> Result<WaveFunction> {
        grid.require(Representation::QLambdaP)?;
        Ok(WaveFunction::from_fn(grid.clone(), |x| Complex64::new(self.reduced_value(x[0], x[1], params), 0.0)))
    }

    /// (Rayleigh quotient, ‖ℋ̂ψ − Ẽψ‖/‖ψ‖) of the reduced problem on a grid.
    pub fn reduced_check(&self, params: &LandauParams, count: usize) -> Result<(f64, f64)> {
        let grid = self.reduced_grid(params, count)?;
        let psi = self.reduced_wavefunction(params, &grid)?;
        let h = self.reduced_operator(params, &grid)?.apply(&psi)?;
        let rq = psi.inner(&h).re / psi.norm_sqr();
        let e = self.eigenvalue(params);
        Ok((rq, h.distance(&psi.scale(Complex64::new(e, 0.0))) / psi.norm()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateMember {
    /// label varied relative to the reference state ("reference" for it)
    pub varied: String,
    pub state: LandauKvnState,
    pub measured: f64,
    pub residual: f64,
}

/// States sharing one KvN eigenvalue, each checked on a grid.
#[derive(Clone, Debug, Serialize)]
pub struct DegeneracyCertificate {
    pub eigenvalue: f64,
    pub labels: Vec<String>,
    pub quantum_labels: Vec<String>,
    pub members: Vec<CertificateMember>,
    pub max_spread: f64,
    pub max_residual: f64,
}

impl DegeneracyCertificate {
    /// Labels along which every varied member reproduces the eigenvalue
    /// within `tol`.
    pub fn independent_labels(&self, tol: f64) -> usize {
        self.labels
            .iter()
            .filter(|l| {
                let ms: Vec<_> = self.members.iter().filter(|m| &m.varied == *l).collect();
                !ms.is_empty() && ms.iter().all(|m| (m.measured - self.eigenvalue).abs() <= tol && m.residual <= tol)
            })
            .count()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KvnLandauLevel {
    pub big_n: i64,
    pub eigenvalue: f64,
    pub certificate: DegeneracyCertificate,
}

/// Ẽ = N(eB/mc) + λ_z0 p_z0/m for each N, with a degeneracy certificate
/// built from states that differ in n, λ_y0, p_y0 and in (λ_z0, p_z0) at
/// fixed product.
pub fn landau_spectrum_kvn(
    range: std::ops::RangeInclusive<i64>,
    lambda_z0: f64,
    p_z0: f64,
    params: &LandauParams,
    delta: f64,
    grid_count: usize,
) -> Result<Vec<KvnLandauLevel>> {
    params.validate()?;
    let mut out = Vec::new();
    for big_n in range {
        let n0 = (-big_n).max(0) as u32;
        let base = LandauKvnState::new(big_n, n0, 0.0, 0.0, lambda_z0, p_z0, delta)?;
        let e = base.eigenvalue(params);
        let mut variants: Vec<(&str, LandauKvnState)> = vec![("reference", base)];
        for dn in [1, 2] {
            variants.push(("n", LandauKvnState { n: n0 + dn, ..base }));
        }
        for ly in [0.7, -1.3] {
            variants.push(("lambda_y0", LandauKvnState { lambda_y0: ly, ..base }));
        }
        for py in [0.9, -0.4] {
            variants.push(("p_y0", LandauKvnState { p_y0: py, ..base }));
        }
        for s in [2.0, 0.5] {
            variants.push(("lambda_z0*p_z0", LandauKvnState { lambda_z0: lambda_z0 * s, p_z0: p_z0 / s, ..base }));
        }
        let mut members = Vec::new();
        let (mut spread, mut worst): (f64, f64) = (0.0, 0.0);
        for (varied, st) in variants {
            let (measured, residual) = st.reduced_check(params, grid_count)?;
            spread = spread.max((measured - e).abs());
            worst = worst.max(residual);
            members.push(CertificateMember { varied: varied.into(), state: st, measured, residual });
        }
        out.push(KvnLandauLevel {
            big_n,
            eigenvalue: e,
            certificate: DegeneracyCertificate {
                eigenvalue: e,
                labels: vec!["n".into(), "lambda_y0".into(), "p_y0".into(), "lambda_z0*p_z0".into()],
                quantum_labels: vec!["p_y0".into()],
                members,
                max_spread: spread,
                max_residual: worst,
            },
        });
    }
    Ok(out)
}
