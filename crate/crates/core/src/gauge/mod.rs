//! Minimal coupling of H and ℋ, the 𝒜 fields and gauge transformations of
//! states and fields.

mod covariance;
mod scenario;

pub use covariance::{
    generalized_two_field_coupling, liouville_gauge_covariance, pass_through_residual, CovarianceReport,
    TwoFieldCoupling,
};
pub use scenario::GaugeScenario;

use serde::Serialize;

use crate::dynamics::{epb, ExtObservable};
use crate::error::{KvnError, Result};
use crate::expr::Expr;
use crate::state::ExtendedState;
use crate::superspace::bosonic_cal;

/// Point particle with mass and an optional potential V(q).
#[derive(Clone, Debug)]
pub struct ChargedParticle {
    pub n: usize,
    pub mass: f64,
    /// V over q_1..q_n.
    pub potential: Option<Expr>,
}

impl ChargedParticle {
    pub fn free(n: usize, mass: f64) -> Self {
        ChargedParticle { n, mass, potential: None }
    }

    pub fn with_potential(n: usize, mass: f64, v: Expr) -> Self {
        ChargedParticle { n, mass, potential: Some(v) }
    }

    /// Σ p²/2m + V(q) over (q, p).
    pub fn hamiltonian(&self) -> Expr {
        let n = self.n;
        let kin = Expr::sum((0..n).map(|i| Expr::var(n + i).sq())) / (2.0 * self.mass);
        match &self.potential {
            Some(v) => kin + v.clone(),
            None => kin,
        }
    }
}

/// Vector potential A(q, t) with charge and light speed. Component and
/// scalar-potential expressions are over (q_1..q_n, t).
#[derive(Clone, Debug)]
pub struct GaugeField {
    pub n: usize,
    pub components: Vec<Expr>,
    pub charge: f64,
    pub c_light: f64,
    pub scalar_potential: Option<Expr>,
}

impl GaugeField {
    pub fn new(components: Vec<Expr>, charge: f64, c_light: f64) -> Result<Self> {
        let n = components.len();
        if n == 0 || n > 3 {
            return Err(KvnError::Dimension(format!("gauge field needs 1 to 3 components, got {n}")));
        }
        if let Some(bad) = components.iter().find(|c| c.arity() > n + 1) {
            return Err(KvnError::Dimension(format!("component {bad} uses variables beyond (q, t)")));
        }
        if !(c_light > 0.0) {
            return Err(KvnError::InvalidParameter("c must be positive".into()));
        }
        Ok(GaugeField { n, components, charge, c_light, scalar_potential: None })
    }

    pub fn zero(n: usize, charge: f64, c_light: f64) -> Result<Self> {
        GaugeField::new(vec![Expr::zero(); n], charge, c_light)
    }

    /// Uniform field B along z in the gauge A = (0, Bx, 0).
    pub fn uniform_b(b: f64, charge: f64, c_light: f64) -> Result<Self> {
        GaugeField::new(vec![Expr::zero(), Expr::var(0) * b, Expr::zero()], charge, c_light)
    }

    /// Field of an infinitely thin solenoid with flux Φ_B on the z axis:
    /// A = Φ_B/(2π(x²+y²)) (−y, x, 0).
    pub fn aharonov_bohm(flux: f64, charge: f64, c_light: f64) -> Result<Self> {
        let (x, y) = (Expr::var(0), Expr::var(1));
        let k = flux / (2.0 * std::f64::consts::PI);
        let r2 = x.sq() + y.sq();
        GaugeField::new(vec![-(y * k) / r2.clone(), (x * k) / r2, Expr::zero()], charge, c_light)
    }

    pub fn with_scalar_potential(mut self, phi: Expr) -> Result<Self> {
        if phi.arity() > self.n + 1 {
            return Err(KvnError::Dimension("scalar potential uses variables beyond (q, t)".into()));
        }
        self.scalar_potential = Some(phi);
        Ok(self)
    }

    /// e/c
    pub fn coupling(&self) -> f64 {
        self.charge / self.c_light
    }

    fn vars(&self, q: &[f64], t: f64) -> Vec<f64> {
        let mut v = q.to_vec();
        v.push(t);
        v
    }

    pub fn value(&self, q: &[f64]) -> Vec<f64> {
        self.value_at(q, 0.0)
    }

    pub fn value_at(&self, q: &[f64], t: f64) -> Vec<f64> {
        let v = self.vars(q, t);
        self.components.iter().map(|c| c.eval(&v)).collect()
    }

    /// ∂A_i/∂q_j as `[i][j]`.
    pub fn jacobian(&self, q: &[f64]) -> Vec<Vec<f64>> {
        self.jacobian_at(q, 0.0)
    }

    pub fn jacobian_at(&self, q: &[f64], t: f64) -> Vec<Vec<f64>> {
        let v = self.vars(q, t);
        self.components
            .iter()
            .map(|c| {
                let j = c.jet(&v, 1);
                j.grad[..self.n].to_vec()
            })
            .collect()
    }

    /// ∂_j∂_k A_i.
    pub fn hessian(&self, i: usize, q: &[f64]) -> Vec<Vec<f64>> {
        let v = self.vars(q, 0.0);
        let j = self.components[i].jet(&v, 2);
        (0..self.n).map(|a| (0..self.n).map(|b| j.hess_at(a, b)).collect()).collect()
    }

    pub fn scalar_at(&self, q: &[f64], t: f64) -> f64 {
        self.scalar_potential.as_ref().map(|p| p.eval(&self.vars(q, t))).unwrap_or(0.0)
    }

    pub fn scalar_grad_at(&self, q: &[f64], t: f64) -> Vec<f64> {
        match &self.scalar_potential {
            Some(p) => p.jet(&self.vars(q, t), 1).grad[..self.n].to_vec(),
            None => vec![0.0; self.n],
        }
    }

    /// Components with time fixed, as expressions over q only.
    pub fn components_at(&self, t: f64) -> Vec<Expr> {
        let n = self.n;
        self.components.iter().map(|c| fix_time(c, n, t)).collect()
    }

    pub fn scalar_at_time(&self, t: f64) -> Option<Expr> {
        self.scalar_potential.as_ref().map(|p| fix_time(p, self.n, t))
    }

    /// Magnetic field curl A at q (three dimensions only).
    pub fn magnetic_field(&self, q: &[f64]) -> Result<[f64; 3]> {
        if self.n != 3 {
            return Err(KvnError::Dimension("magnetic field needs three dimensions".into()));
        }
        let j = self.jacobian(q);
        Ok([j[2][1] - j[1][2], j[0][2] - j[2][0], j[1][0] - j[0][1]])
    }

    /// A → A + ∇α and Φ → Φ − (1/c) ∂α/∂t.
    pub fn gauge_transformed(&self, alpha: &GaugeParam) -> Result<GaugeField> {
        if alpha.n != self.n {
            return Err(KvnError::Dimension("gauge parameter and field dimensions differ".into()));
        }
        let components = self.components.iter().enumerate().map(|(i, c)| c.clone() + alpha.alpha.diff(i)).collect();
        let dt = alpha.alpha.diff(self.n);
        let scalar = match (&self.scalar_potential, dt.is_zero()) {
            (s, true) => s.clone(),
            (Some(p), false) => Some(p.clone() - dt / self.c_light),
            (None, false) => Some(-(dt / self.c_light)),
        };
        Ok(GaugeField { n: self.n, components, charge: self.charge, c_light: self.c_light, scalar_potential: scalar })
    }
}

fn fix_time(e: &Expr, n: usize, t: f64) -> Expr {
    e.substitute(&|i| if i == n { Expr::constant(t) } else { Expr::var(i) })
}

/// Gauge function α(q, t) as an expression over (q_1..q_n, t).
#[derive(Clone, Debug)]
pub struct GaugeParam {
    pub n: usize,
    pub alpha: Expr,
}

impl GaugeParam {
    pub fn new(n: usize, alpha: Expr) -> Result<Self> {
        if alpha.arity() > n + 1 {
            return Err(KvnError::Dimension("gauge parameter uses variables beyond (q, t)".into()));
        }
        Ok(GaugeParam { n, alpha })
    }

    pub fn zero(n: usize) -> Self {
        GaugeParam { n, alpha: Expr::zero() }
    }

    fn vars(&self, q: &[f64], t: f64) -> Vec<f64> {
        let mut v = q.to_vec();
        v.push(t);
        v
    }

    pub fn value(&self, q: &[f64], t: f64) -> f64 {
        self.alpha.eval(&self.vars(q, t))
    }

    pub fn grad(&self, q: &[f64], t: f64) -> Vec<f64> {
        self.alpha.jet(&self.vars(q, t), 1).grad[..self.n].to_vec()
    }

    pub fn hess(&self, q: &[f64], t: f64) -> Vec<Vec<f64>> {
        let j = self.alpha.jet(&self.vars(q, t), 2);
        (0..self.n).map(|a| (0..self.n).map(|b| j.hess_at(a, b)).collect()).collect()
    }

    pub fn time_derivative(&self, q: &[f64], t: f64) -> f64 {
        self.alpha.jet(&self.vars(q, t), 1).grad[self.n]
    }

    pub fn is_time_dependent(&self) -> bool {
        self.alpha.depends_on(self.n)
    }

    /// α̃ = −Σ_j λ_{p_j} ∂_j α.
    pub fn alpha_tilde(&self, q: &[f64], lam_p: &[f64], t: f64) -> f64 {
        -self.grad(q, t).iter().zip(lam_p).map(|(g, l)| g * l).sum::<f64>()
    }
}

/// H with p_i → p_i − (e/c)A_i(q) (and + eΦ when a scalar potential is set),
/// at time zero.
pub fn couple_h(h_free: &Expr, field: &GaugeField) -> Expr {
    couple_h_at(h_free, field, 0.0)
}

pub fn couple_h_at(h_free: &Expr, field: &GaugeField, t: f64) -> Expr {
    let n = field.n;
    let k = field.coupling();
    let a = field.components_at(t);
    let h = h_free.substitute(&|i| {
        if i >= n && i < 2 * n {
            Expr::var(i) - a[i - n].clone() * k
        } else {
            Expr::var(i)
        }
    });
    match field.scalar_at_time(t) {
        Some(p) => h + p * field.charge,
        None => h,
    }
}

/// 𝒜_i = −Σ_j λ_{p_j} ∂A_i/∂q_j.
pub fn curly_a(field: &GaugeField, q: &[f64], lam_p: &[f64]) -> Vec<f64> {
    field
        .jacobian(q)
        .iter()
        .map(|row| -row.iter().zip(lam_p).map(|(d, l)| d * l).sum::<f64>())
        .collect()
}

/// ℋ = (1/m) Σ (λ_{q_i} − (e/c)𝒜_i)(p_i − (e/c)A_i) − Σ λ_{p_i} ∂_i(V + eΦ).
pub fn couple_cal_h(particle: &ChargedParticle, field: &GaugeField, s: &ExtendedState) -> Result<f64> {
    let n = particle.n;
    if field.n != n || s.n != n {
        return Err(KvnError::Dimension("particle, field and state dimensions differ".into()));
    }
    let q = &s.phi[..n];
    let p = &s.phi[n..];
    let lq = &s.lam[..n];
    let lp = &s.lam[n..];
    let k = field.coupling();
    let a = field.value(q);
    let ca = curly_a(field, q, lp);
    let mut out = 0.0;
    for i in 0..n {
        out += (lq[i] - k * ca[i]) * (p[i] - k * a[i]) / particle.mass;
    }
    let mut force = field.scalar_grad_at(q, 0.0);
    for f in force.iter_mut() {
        *f *= field.charge;
    }
    if let Some(v) = &particle.potential {
        let g = v.jet(q, 1).grad;
        for i in 0..n {
            force[i] += g[i];
        }
    }
    for i in 0..n {
        out -= lp[i] * force[i];
    }
    Ok(out)
}

/// p_i += (e/c)∂_iα, λ_{q_i} −= (e/c) Σ_j λ_{p_j} ∂_j∂_iα; q and λ_p untouched.
pub fn gauge_transform_state(s: &ExtendedState, alpha: &GaugeParam, coupling: f64) -> Result<ExtendedState> {
    let n = s.n;
    if alpha.n != n {
        return Err(KvnError::Dimension("gauge parameter and state dimensions differ".into()));
    }
    let q = s.phi[..n].to_vec();
    let g = alpha.grad(&q, 0.0);
    let h = alpha.hess(&q, 0.0);
    let mut out = s.clone();
    for i in 0..n {
        out.phi[n + i] += coupling * g[i];
        let corr: f64 = (0..n).map(|j| s.lam[n + j] * h[j][i]).sum();
        out.lam[i] -= coupling * corr;
    }
    Ok(out)
}

/// Per-state outcome of the velocity-evolution comparison.
#[derive(Clone, Debug, Serialize)]
pub struct VelocityRow {
    pub state: usize,
    pub component: usize,
    pub extra: f64,
    pub expected: f64,
    pub extra_full_transform: f64,
    pub lorentz_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VelocityReport {
    pub rows: Vec<VelocityRow>,
    /// max |extra − (e/mc) Σ_j ∂_j∂_iα v_j|
    pub max_residual: f64,
    /// max |extra| when λ_q is transformed too
    pub max_full_transform: f64,
    /// max |{v_i, ℋ} − (e/mc)(v×B)_i + ∂_i(V+eΦ)/m|
    pub max_lorentz_residual: f64,
}

/// Compare {v_i, ℋ'} with {v_i, ℋ}, where ℋ' is built from A' = A + ∇α and
/// p' = p + (e/c)∇α while λ is left untransformed; the difference is the
/// α-dependent term (e/mc) Σ_j ∂_j∂_iα v_j. Also reports the same difference
/// when λ_q is transformed as well, which must vanish.
pub fn velocity_evolution_check(
    particle: &ChargedParticle,
    field: &GaugeField,
    alpha: &GaugeParam,
    states: &[ExtendedState],
) -> Result<VelocityReport> {
    let n = particle.n;
    if field.n != n || alpha.n != n {
        return Err(KvnError::Dimension("particle, field and gauge dimensions differ".into()));
    }
    let k = field.coupling();
    let m = particle.mass;
    let h_free = particle.hamiltonian();
    let cal_a = bosonic_cal(&couple_h(&h_free, field), n);
    let primed = field.gauge_transformed(alpha)?;
    let cal_ap = bosonic_cal(&couple_h(&h_free, &primed), n);
    let a0 = GaugeParam { n, alpha: fix_time(&alpha.alpha, n, 0.0) };
    let grad: Vec<Expr> = (0..n).map(|i| a0.alpha.diff(i)).collect();
    let hess: Vec<Vec<Expr>> = (0..n).map(|i| (0..n).map(|j| grad[i].diff(j)).collect()).collect();
    let shifted = |full: bool| {
        cal_ap.substitute(&|v| {
            if v >= n && v < 2 * n {
                Expr::var(v) + grad[v - n].clone() * k
            } else if full && v >= 2 * n && v < 3 * n {
                let i = v - 2 * n;
                Expr::var(v) - Expr::sum((0..n).map(|j| Expr::var(3 * n + j) * hess[j][i].clone())) * k
            } else {
                Expr::var(v)
            }
        })
    };
    // a time-dependent map p → p + (e/c)∇α(q, t) also contributes the lift of (e/c)∂_tα
    let moving = bosonic_cal(&(fix_time(&alpha.alpha.diff(n), n, 0.0) * k), n);
    let cal_half = ExtObservable::bosonic(n, shifted(false) + moving.clone());
    let cal_full = ExtObservable::bosonic(n, shifted(true) + moving);
    let cal_orig = ExtObservable::bosonic(n, cal_a);
    let a_now = field.components_at(0.0);
    let vel: Vec<ExtObservable> = (0..n)
        .map(|i| ExtObservable::bosonic(n, (Expr::var(n + i) - a_now[i].clone() * k) / m))
        .collect();
    let mut rep = VelocityReport { rows: Vec::new(), max_residual: 0.0, max_full_transform: 0.0, max_lorentz_residual: 0.0 };
    for (si, s) in states.iter().enumerate() {
        if s.n != n {
            return Err(KvnError::Dimension("state dimension differs".into()));
        }
        let q = &s.phi[..n];
        let p = &s.phi[n..];
        let av = field.value(q);
        let v: Vec<f64> = (0..n).map(|i| (p[i] - k * av[i]) / m).collect();
        let ah = a0.hess(q, 0.0);
        let mut force = field.scalar_grad_at(q, 0.0);
        for f in force.iter_mut() {
            *f *= field.charge;
        }
        if let Some(pot) = &particle.potential {
            let g = pot.jet(q, 1).grad;
            for i in 0..n {
                force[i] += g[i];
            }
        }
        let b = if n == 3 { Some(field.magnetic_field(q)?) } else { None };
        for i in 0..n {
            let base = epb(&vel[i], &cal_orig, s)?.body().re;
            let half = epb(&vel[i], &cal_half, s)?.body().re;
            let full = epb(&vel[i], &cal_full, s)?.body().re;
            let expected = k / m * (0..n).map(|j| ah[j][i] * v[j]).sum::<f64>();
            let lorentz = match b {
                Some(b) => {
                    let vxb = [v[1] * b[2] - v[2] * b[1], v[2] * b[0] - v[0] * b[2], v[0] * b[1] - v[1] * b[0]];
                    k / m * vxb[i] - force[i] / m
                }
                None => base,
            };
            let row = VelocityRow {
                state: si,
                component: i,
                extra: half - base,
                expected,
                extra_full_transform: full - base,
                lorentz_residual: (base - lorentz).abs(),
            };
            rep.max_residual = rep.max_residual.max((row.extra - row.expected).abs());
            rep.max_full_transform = rep.max_full_transform.max(row.extra_full_transform.abs());
            rep.max_lorentz_residual = rep.max_lorentz_residual.max(row.lorentz_residual);
            rep.rows.push(row);
        }
    }
    Ok(rep)
}
