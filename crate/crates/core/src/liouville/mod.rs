//! Matrix-free grid Liouvillians in the (q, p) and (q, λ_p) representations,
//! spectral time stepping and the method of characteristics.

mod characteristics;

pub use characteristics::{evolve_characteristics, evolve_characteristics_grid, interpolate};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{KvnError, Result};
use crate::expr::Expr;
use crate::gauge::{ChargedParticle, GaugeField};
use crate::grid::{PhaseGrid, Representation, Spectral, WaveFunction};
use crate::state::omega_partner;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Debug, Serialize)]
pub struct OperatorInfo {
    pub source: String,
    pub representation: Representation,
    pub scheme: String,
    pub warnings: Vec<String>,
}

/// Linear operator acting on wavefunctions of one grid.
pub trait GridOperator: Send + Sync {
    fn apply(&self, psi: &WaveFunction) -> Result<WaveFunction>;
    fn info(&self) -> &OperatorInfo;
    /// Upper bound on the spectral radius, used for the step-size check.
    fn spectral_bound(&self) -> f64;
    fn grid(&self) -> &PhaseGrid;
}

fn check_grid(op: &PhaseGrid, psi: &WaveFunction) -> Result<()> {
    if op.axes != psi.grid.axes || op.repr != psi.grid.repr {
        return Err(KvnError::Dimension("wavefunction grid differs from the operator grid".into()));
    }
    Ok(())
}

/// ℋ̂ = −i ω^{ab} ∂_bH ∂_a on a periodic (q, p) grid, written in the
/// skew-symmetric form −(i/2) Σ_a (v_a D_a + D_a v_a), v = ω∂H, which is
/// Hermitian on the grid.
pub struct Liouvillian {
    grid: PhaseGrid,
    velocity: Vec<Vec<f64>>,
    spectral: Spectral,
    info: OperatorInfo,
    bound: f64,
}

pub fn build_liouvillian(h: &Expr, grid: &PhaseGrid) -> Result<Liouvillian> {
    grid.require(Representation::QP)?;
    let n = grid.n;
    if h.arity() > 2 * n {
        return Err(KvnError::Dimension("Hamiltonian uses more variables than the grid has axes".into()));
    }
    let velocity: Vec<Vec<f64>> = (0..2 * n)
        .map(|a| {
            let (b, w) = omega_partner(n, a);
            let c = (h.diff(b) * w).compile();
            grid.sample(|x| c.eval(x))
        })
        .collect();
    let mut warnings = Vec::new();
    let strides = grid.strides();
    for (a, v) in velocity.iter().enumerate() {
        let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let last = grid.axes[a].count - 1;
        let mut jump = 0.0f64;
        for i in 0..grid.len() {
            if grid.multi_index(i)[a] == 0 {
                jump = jump.max((v[i] - v[i + last * strides[a]]).abs());
            }
        }
        if vmax > 0.0 && jump > 1e-6 * vmax {
            warnings.push(format!(
                "coefficient along axis {a} is not periodic (jump {jump:.3e}, max {vmax:.3e}); keep states away from the boundary"
            ));
        }
    }
    let bound = velocity
        .iter()
        .zip(&grid.axes)
        .map(|(v, ax)| v.iter().fold(0.0f64, |m, x| m.max(x.abs())) * ax.k_max())
        .sum();
    Ok(Liouvillian {
        spectral: Spectral::new(grid),
        grid: grid.clone(),
        velocity,
        info: OperatorInfo {
            source: format!("H = {h}"),
            representation: Representation::QP,
            scheme: "Fourier spectral, skew-symmetric".into(),
            warnings,
        },
        bound,
    })
}

impl GridOperator for Liouvillian {
    fn apply(&self, psi: &WaveFunction) -> Result<WaveFunction> {
        check_grid(&self.grid, psi)?;
        let mut out = vec![Complex64::default(); psi.data.len()];
        for (a, v) in self.velocity.iter().enumerate() {
            if v.iter().all(|x| *x == 0.0) {
                continue;
            }
            let d = self.spectral.derivative(&psi.data, a);
            let vpsi: Vec<Complex64> = psi.data.iter().zip(v).map(|(z, c)| z * c).collect();
            let dv = self.spectral.derivative(&vpsi, a);
            for i in 0..out.len() {
                out[i] += -0.5 * I * (v[i] * d[i] + dv[i]);
            }
        }
        WaveFunction::from_data(self.grid.clone(), out)
    }

    fn info(&self) -> &OperatorInfo {
        &self.info
    }

    fn spectral_bound(&self) -> f64 {
        self.bound
    }

    fn grid(&self) -> &PhaseGrid {
        &self.grid
    }
}

/// Mixed-representation operator
/// Σ_i (1/m)(−i∂_{q_i} + f_i)(i∂_{λ_i} − g_i) + W
/// with f_i, g_i, W sampled on the grid.
pub struct MixedOperator {
    grid: PhaseGrid,
    mass: f64,
    f: Vec<Option<Vec<f64>>>,
    g: Vec<Option<Vec<f64>>>,
    w: Option<Vec<f64>>,
    spectral: Spectral,
    info: OperatorInfo,
}

impl MixedOperator {
    /// (1/m) Σ ∂_{q_i} ∂_{λ_i}
    pub fn free(grid: &PhaseGrid, mass: f64) -> Result<Self> {
        grid.require(Representation::QLambdaP)?;
        if !(mass > 0.0) {
            return Err(KvnError::InvalidParameter("mass must be positive".into()));
        }
        Ok(MixedOperator {
            grid: grid.clone(),
            mass,
            f: vec![None; grid.n],
            g: vec![None; grid.n],
            w: None,
            spectral: Spectral::new(grid),
            info: OperatorInfo {
                source: format!("free, m = {mass}"),
                representation: Representation::QLambdaP,
                scheme: "Fourier spectral".into(),
                warnings: Vec::new(),
            },
        })
    }

    /// Set the field pair of dimension i from expressions over (q, λ).
    pub fn with_fields(mut self, i: usize, f: Option<&Expr>, g: Option<&Expr>) -> Self {
        if let Some(f) = f {
            let c = f.compile();
            self.f[i] = Some(self.grid.sample(|x| c.eval(x)));
        }
        if let Some(g) = g {
            let c = g.compile();
            self.g[i] = Some(self.grid.sample(|x| c.eval(x)));
        }
        self
    }

    /// Add a multiplicative term W(q, λ).
    pub fn with_multiplier(mut self, w: &Expr) -> Self {
        let c = w.compile();
        let add = self.grid.sample(|x| c.eval(x));
        self.w = Some(match self.w.take() {
            Some(old) => old.iter().zip(&add).map(|(a, b)| a + b).collect(),
            None => add,
        });
        self
    }

    pub fn with_source(mut self, s: &str) -> Self {
        self.info.source = s.to_string();
        self
    }
}

fn max_abs(v: &Option<Vec<f64>>) -> f64 {
    v.as_ref().map(|v| v.iter().fold(0.0f64, |m, x| m.max(x.abs()))).unwrap_or(0.0)
}

impl GridOperator for MixedOperator {
    fn apply(&self, psi: &WaveFunction) -> Result<WaveFunction> {
        check_grid(&self.grid, psi)?;
        let n = self.grid.n;
        let len = psi.data.len();
        let mut out = match &self.w {
            Some(w) => psi.data.iter().zip(w).map(|(z, w)| z * w).collect(),
            None => vec![Complex64::default(); len],
        };
        for i in 0..n {
            let dl = self.spectral.derivative(&psi.data, n + i);
            let mut y: Vec<Complex64> = dl.iter().map(|z| I * z).collect();
            if let Some(g) = &self.g[i] {
                for k in 0..len {
                    y[k] -= g[k] * psi.data[k];
                }
            }
            let dq = self.spectral.derivative(&y, i);
            for k in 0..len {
                let mut x = -I * dq[k];
                if let Some(f) = &self.f[i] {
                    x += f[k] * y[k];
                }
                out[k] += x / self.mass;
            }
        }
        WaveFunction::from_data(self.grid.clone(), out)
    }

    fn info(&self) -> &OperatorInfo {
        &self.info
    }

    fn spectral_bound(&self) -> f64 {
        let n = self.grid.n;
        let mut b = max_abs(&self.w);
        for i in 0..n {
            b += (self.grid.axes[i].k_max() + max_abs(&self.f[i])) * (self.grid.axes[n + i].k_max() + max_abs(&self.g[i]))
                / self.mass;
        }
        b
    }

    fn grid(&self) -> &PhaseGrid {
        &self.grid
    }
}

/// Mixed operator of a particle in a field at time t:
/// X_i = −i∂_{q_i} + (e/c) Σ_j λ_j ∂_jA_i, Y_i = i∂_{λ_i} − (e/c)A_i,
/// W = −Σ_i λ_i ∂_i(V + eΦ).
pub fn build_mixed_operator(
    particle: &ChargedParticle,
    field: Option<&GaugeField>,
    grid: &PhaseGrid,
    t: f64,
) -> Result<MixedOperator> {
    let n = grid.n;
    if particle.n != n {
        return Err(KvnError::Dimension("particle and grid dimensions differ".into()));
    }
    let mut op = MixedOperator::free(grid, particle.mass)?;
    let lam = |j: usize| Expr::var(n + j);
    let mut force = match &particle.potential {
        Some(v) => v.clone(),
        None => Expr::zero(),
    };
    let mut src = format!("m = {}", particle.mass);
    if let Some(field) = field {
        if field.n != n {
            return Err(KvnError::Dimension("field and grid dimensions differ".into()));
        }
        let k = field.coupling();
        let a = field.components_at(t);
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            let f = Expr::sum((0..n).map(|j| lam(j) * a[i].diff(j))) * k;
            let g = a[i].clone() * k;
            op = op.with_fields(i, (!f.is_zero()).then_some(&f), Some(&g));
        }
        if let Some(phi) = field.scalar_at_time(t) {
            force = force + phi * field.charge;
        }
        src.push_str(&format!(", A = [{}]", a.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")));
    }
    let w = -Expr::sum((0..n).map(|i| lam(i) * force.diff(i)));
    if !w.is_zero() {
        op = op.with_multiplier(&w);
    }
    Ok(op.with_source(&src))
}

/// RK4 integration of i∂_tψ = ℋ̂ψ up to time t with steps no longer than dt.
pub fn evolve_spectral(op: &dyn GridOperator, psi: &WaveFunction, t: f64, dt: f64) -> Result<WaveFunction> {
    evolve_spectral_td(&|_| Ok(op), psi, t, dt)
}

/// Largest stable RK4 step for an operator bound: 2.8/bound (the method is
/// stable on the imaginary axis up to 2√2).
pub fn max_stable_dt(bound: f64) -> f64 {
    2.8 / bound
}

/// Time-dependent variant: `op_at(t)` supplies ℋ̂(t).
pub fn evolve_spectral_td<O>(
    op_at: &dyn Fn(f64) -> Result<O>,
    psi: &WaveFunction,
    t: f64,
    dt: f64,
) -> Result<WaveFunction>
where
    O: std::ops::Deref,
    O::Target: GridOperator,
{
    if t == 0.0 {
        return Ok(psi.clone());
    }
    if !(dt > 0.0) || !(t > 0.0) {
        return Err(KvnError::InvalidParameter(format!("need t > 0 and dt > 0, got t = {t}, dt = {dt}")));
    }
    let steps = (t / dt - 1e-9).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let rate = |o: &O, x: &WaveFunction| -> Result<WaveFunction> { Ok(o.apply(x)?.scale(-I)) };
    let mut x = psi.clone();
    let mut time = 0.0;
    let op0 = op_at(0.0)?;
    let bound = op0.spectral_bound();
    if h * bound > 2.8 {
        return Err(KvnError::Cfl { dt, suggested: 2.5 / bound });
    }
    let mut cur = op0;
    for _ in 0..steps {
        let mid = op_at(time + h / 2.0)?;
        let end = op_at(time + h)?;
        let k1 = rate(&cur, &x)?;
        let k2 = rate(&mid, &x.axpy(Complex64::new(h / 2.0, 0.0), &k1))?;
        let k3 = rate(&mid, &x.axpy(Complex64::new(h / 2.0, 0.0), &k2))?;
        let k4 = rate(&end, &x.axpy(Complex64::new(h, 0.0), &k3))?;
        let mut next = x.axpy(Complex64::new(h / 6.0, 0.0), &k1);
        next = next.axpy(Complex64::new(h / 3.0, 0.0), &k2);
        next = next.axpy(Complex64::new(h / 3.0, 0.0), &k3);
        x = next.axpy(Complex64::new(h / 6.0, 0.0), &k4);
        time += h;
        cur = end;
    }
    Ok(x)
}

/// Dense matrix of an operator, only for grids with at most 64² points.
pub fn to_dense(op: &dyn GridOperator) -> Result<Vec<Vec<Complex64>>> {
    let grid = op.grid();
    let len = grid.len();
    if len > 64 * 64 {
        return Err(KvnError::InvalidParameter(format!("dense form limited to 4096 points, grid has {len}")));
    }
    let mut cols = Vec::with_capacity(len);
    for j in 0..len {
        let mut e = WaveFunction::zeros(grid.clone());
        e.data[j] = Complex64::new(1.0, 0.0);
        cols.push(op.apply(&e)?.data);
    }
    Ok((0..len).map(|i| (0..len).map(|j| cols[j][i]).collect()).collect())
}
