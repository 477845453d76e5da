use num_complex::Complex64;
use serde::Serialize;

use super::{ChargedParticle, GaugeField, GaugeParam};
use crate::error::{KvnError, Result};
use crate::expr::Expr;
use crate::grid::{gauge_phase_mixed, PhaseGrid, Representation, WaveFunction};
use crate::liouville::{build_mixed_operator, evolve_spectral_td, GridOperator, MixedOperator};

#[derive(Clone, Debug, Serialize)]
pub struct CovarianceReport {
    /// ‖U(T)ψ_A(T) − ψ'(T)‖ / ‖ψ(0)‖
    pub residual: f64,
    pub norm_drift: f64,
    pub time: f64,
    pub dt: f64,
}

/// Compare two routes to the transformed state at time T:
/// evolve with ℋ̂_A then apply U(T) = exp(i(e/c)α̃(T)), versus apply U(0)
/// then evolve with ℋ̂' built from A + ∇α and Φ − (1/c)∂_tα.
pub fn liouville_gauge_covariance(
    psi: &WaveFunction,
    particle: &ChargedParticle,
    field: &GaugeField,
    alpha: &GaugeParam,
    t: f64,
    dt: f64,
) -> Result<CovarianceReport> {
    psi.grid.require(Representation::QLambdaP)?;
    let grid = psi.grid.clone();
    let k = field.coupling();
    let primed = field.gauge_transformed(alpha)?;
    let evolve = |f: &GaugeField, start: &WaveFunction| {
        let static_op = if field_is_static(f) { Some(build_mixed_operator(particle, Some(f), &grid, 0.0)?) } else { None };
        match static_op {
            Some(op) => evolve_spectral_td(&|_| Ok(&op), start, t, dt),
            None => evolve_spectral_td(&|s| build_mixed_operator(particle, Some(f), &grid, s).map(Box::new), start, t, dt),
        }
    };
    let path1 = gauge_phase_mixed(&evolve(field, psi)?, alpha, k, t)?;
    let path2 = evolve(&primed, &gauge_phase_mixed(psi, alpha, k, 0.0)?)?;
    let n0 = psi.norm();
    Ok(CovarianceReport {
        residual: path1.distance(&path2) / n0,
        norm_drift: (path2.norm() - n0).abs() / n0,
        time: t,
        dt,
    })
}

fn field_is_static(f: &GaugeField) -> bool {
    let n = f.n;
    !f.components.iter().chain(f.scalar_potential.iter()).any(|c| c.depends_on(n))
}

/// Two independent fields on (q, λ_p) entering
/// ℋ̂ = Σ_i (1/m)(−i∂_{q_i} + A_{q_i})(i∂_{λ_i} − A_{λ_i}).
/// Expressions are over (q_1..q_n, λ_1..λ_n).
#[derive(Clone, Debug)]
pub struct TwoFieldCoupling {
    pub n: usize,
    pub mass: f64,
    pub a_q: Vec<Expr>,
    pub a_lam: Vec<Expr>,
}

pub fn generalized_two_field_coupling(a_q: Vec<Expr>, a_lam: Vec<Expr>, mass: f64) -> Result<TwoFieldCoupling> {
    let n = a_q.len();
    if n == 0 || a_lam.len() != n {
        return Err(KvnError::Dimension("need the same nonzero number of A_q and A_λ components".into()));
    }
    if a_q.iter().chain(&a_lam).any(|e| e.arity() > 2 * n) {
        return Err(KvnError::Dimension("fields may depend on (q, λ_p) only".into()));
    }
    if !(mass > 0.0) {
        return Err(KvnError::InvalidParameter("mass must be positive".into()));
    }
    Ok(TwoFieldCoupling { n, mass, a_q, a_lam })
}

impl TwoFieldCoupling {
    /// The standard minimal coupling: A_q = (e/c) Σ_j λ_j ∂_jA_i, A_λ = (e/c)A_i.
    pub fn from_field(field: &GaugeField, mass: f64) -> Result<Self> {
        let n = field.n;
        let k = field.coupling();
        let a = field.components_at(0.0);
        let a_q = (0..n).map(|i| Expr::sum((0..n).map(|j| Expr::var(n + j) * a[i].diff(j))) * k).collect();
        let a_lam = a.iter().map(|c| c.clone() * k).collect();
        generalized_two_field_coupling(a_q, a_lam, mass)
    }

    pub fn operator(&self, grid: &PhaseGrid) -> Result<MixedOperator> {
        if grid.n != self.n {
            return Err(KvnError::Dimension("coupling and grid dimensions differ".into()));
        }
        let mut op = MixedOperator::free(grid, self.mass)?;
        for i in 0..self.n {
            op = op.with_fields(
                i,
                (!self.a_q[i].is_zero()).then_some(&self.a_q[i]),
                (!self.a_lam[i].is_zero()).then_some(&self.a_lam[i]),
            );
        }
        Ok(op.with_source("two-field coupling"))
    }

    /// A'_q = A_q − ∂_qα, A'_λ = A_λ − ∂_λα for α(q, λ_p).
    pub fn transformed(&self, alpha: &Expr) -> TwoFieldCoupling {
        let n = self.n;
        TwoFieldCoupling {
            n,
            mass: self.mass,
            a_q: (0..n).map(|i| self.a_q[i].clone() - alpha.diff(i)).collect(),
            a_lam: (0..n).map(|i| self.a_lam[i].clone() - alpha.diff(n + i)).collect(),
        }
    }
}

/// ‖ℋ̂'(e^{iα}ψ) − e^{iα}ℋ̂ψ‖ / ‖ℋ̂ψ‖ for α over (q, λ_p).
pub fn pass_through_residual(coupling: &TwoFieldCoupling, alpha: &Expr, psi: &WaveFunction) -> Result<f64> {
    psi.grid.require(Representation::QLambdaP)?;
    let c = alpha.compile();
    let phase: Vec<Complex64> = psi.grid.sample(|x| c.eval(x)).iter().map(|a| Complex64::from_polar(1.0, *a)).collect();
    let h = coupling.operator(&psi.grid)?;
    let hp = coupling.transformed(alpha).operator(&psi.grid)?;
    let lhs = hp.apply(&psi.multiply_pointwise(&phase))?;
    let hpsi = h.apply(psi)?;
    let rhs = hpsi.multiply_pointwise(&phase);
    Ok(lhs.distance(&rhs) / hpsi.norm().max(f64::MIN_POSITIVE))
}
