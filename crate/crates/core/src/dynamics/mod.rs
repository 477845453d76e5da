//! Extended Poisson brackets, the extended-space equations of motion with
//! ghosts, RK4 trajectories and the constants of the Landau problem.

mod landau;

pub use landau::{check_constants_landau, landau_hamiltonian, landau_observables, LandauConstants, LandauObservables};

use std::io::Write;

use num_complex::Complex64;

use crate::error::{KvnError, Result};
use crate::expr::{Compiled, Expr};
use crate::state::{omega_partner, ExtendedState};
use crate::superspace::{bosonic_cal, GrassmannElement, Observable};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Ghost bilinear `scale · c̄_a M^a_b(φ) c^b`.
#[derive(Clone, Debug)]
pub struct Bilinear {
    pub scale: Complex64,
    pub m: Vec<Vec<Expr>>,
}

/// Observable on the extended space: a bosonic expression over (φ, λ) plus
/// ghost terms at most bilinear. Variables 0..2n are φ, 2n..4n are λ; ghost
/// coefficients depend on φ only.
#[derive(Clone, Debug)]
pub struct ExtObservable {
    pub n: usize,
    pub bosonic: Expr,
    pub c_linear: Vec<Expr>,
    pub cbar_linear: Vec<Expr>,
    pub bilinear: Option<Bilinear>,
}

impl ExtObservable {
    pub fn bosonic(n: usize, e: Expr) -> Self {
        ExtObservable { n, bosonic: e, c_linear: Vec::new(), cbar_linear: Vec::new(), bilinear: None }
    }

    pub fn phi(n: usize, a: usize) -> Self {
        ExtObservable::bosonic(n, Expr::var(a))
    }

    pub fn lam(n: usize, a: usize) -> Self {
        ExtObservable::bosonic(n, Expr::var(2 * n + a))
    }

    pub fn c(n: usize, a: usize) -> Self {
        let mut o = ExtObservable::bosonic(n, Expr::zero());
        o.c_linear = unit(2 * n, a);
        o
    }

    pub fn cbar(n: usize, a: usize) -> Self {
        let mut o = ExtObservable::bosonic(n, Expr::zero());
        o.cbar_linear = unit(2 * n, a);
        o
    }

    /// 𝒪 for a phase-space function O: λ_a ω^{ab} ∂_b O + i c̄_a ω^{ad} ∂_d∂_b O c^b.
    pub fn cal(o: &Expr, n: usize) -> Self {
        let hess: Vec<Vec<Expr>> = (0..2 * n)
            .map(|a| {
                let (d, w) = omega_partner(n, a);
                let od = o.diff(d);
                (0..2 * n).map(|b| od.diff(b) * w).collect()
            })
            .collect();
        ExtObservable {
            n,
            bosonic: bosonic_cal(o, n),
            c_linear: Vec::new(),
            cbar_linear: Vec::new(),
            bilinear: Some(Bilinear { scale: I, m: hess }),
        }
    }

    pub fn product_bosonic(&self, o: &ExtObservable) -> Result<Self> {
        if !self.is_bosonic() || !o.is_bosonic() || self.n != o.n {
            return Err(KvnError::InvalidParameter("products are only formed between bosonic observables".into()));
        }
        Ok(ExtObservable::bosonic(self.n, self.bosonic.clone() * o.bosonic.clone()))
    }

    pub fn is_bosonic(&self) -> bool {
        self.c_linear.is_empty() && self.cbar_linear.is_empty() && self.bilinear.is_none()
    }

    /// Value at a state.
    pub fn value(&self, s: &ExtendedState) -> GrassmannElement {
        let vars = s.bosonic_vars();
        let mut out = even_eval(&self.bosonic, s, None);
        for (a, u) in self.c_linear.iter().enumerate() {
            out = &out + &s.c[a].scale(u.eval(&vars));
        }
        for (a, v) in self.cbar_linear.iter().enumerate() {
            out = &out + &s.cbar[a].scale(v.eval(&vars));
        }
        if let Some(bl) = &self.bilinear {
            for (a, row) in bl.m.iter().enumerate() {
                for (b, m) in row.iter().enumerate() {
                    let v = m.eval(&vars);
                    if v != 0.0 {
                        out = &out + &(&s.cbar[a] * &s.c[b]).scale(bl.scale * v);
                    }
                }
            }
        }
        out
    }

    /// ∂/∂v of the observable, where v indexes (φ, λ).
    fn d_bosonic(&self, s: &ExtendedState, v: usize) -> GrassmannElement {
        let vars = s.bosonic_vars();
        let mut out = even_eval(&self.bosonic, s, Some(v));
        if v >= 2 * self.n {
            return out;
        }
        for (a, u) in self.c_linear.iter().enumerate() {
            let d = u.diff(v).eval(&vars);
            if d != 0.0 {
                out = &out + &s.c[a].scale(d);
            }
        }
        for (a, u) in self.cbar_linear.iter().enumerate() {
            let d = u.diff(v).eval(&vars);
            if d != 0.0 {
                out = &out + &s.cbar[a].scale(d);
            }
        }
        if let Some(bl) = &self.bilinear {
            for (a, row) in bl.m.iter().enumerate() {
                for (b, m) in row.iter().enumerate() {
                    let d = m.diff(v).eval(&vars);
                    if d != 0.0 {
                        out = &out + &(&s.cbar[a] * &s.c[b]).scale(bl.scale * d);
                    }
                }
            }
        }
        out
    }

    fn bilinear_value(&self, s: &ExtendedState, a: usize, b: usize) -> Complex64 {
        match &self.bilinear {
            Some(bl) => bl.scale * bl.m[a][b].eval(&s.bosonic_vars()),
            None => Complex64::default(),
        }
    }

    fn ghost_coeff(list: &[Expr], d: usize, s: &ExtendedState) -> f64 {
        list.get(d).map(|u| u.eval(&s.bosonic_vars())).unwrap_or(0.0)
    }

    /// Right derivative with respect to the symbol c^d.
    fn right_dc(&self, s: &ExtendedState, d: usize) -> GrassmannElement {
        let g = s.generator_count();
        let mut out = GrassmannElement::scalar(g, Self::ghost_coeff(&self.c_linear, d, s));
        for a in 0..2 * self.n {
            out = &out + &s.cbar[a].scale(self.bilinear_value(s, a, d));
        }
        out
    }

    /// Right derivative with respect to the symbol c̄_d.
    fn right_dcbar(&self, s: &ExtendedState, d: usize) -> GrassmannElement {
        let g = s.generator_count();
        let mut out = GrassmannElement::scalar(g, Self::ghost_coeff(&self.cbar_linear, d, s));
        for b in 0..2 * self.n {
            out = &out - &s.c[b].scale(self.bilinear_value(s, d, b));
        }
        out
    }

    /// Left derivative with respect to the symbol c^d.
    fn left_dc(&self, s: &ExtendedState, d: usize) -> GrassmannElement {
        let g = s.generator_count();
        let mut out = GrassmannElement::scalar(g, Self::ghost_coeff(&self.c_linear, d, s));
        for a in 0..2 * self.n {
            out = &out - &s.cbar[a].scale(self.bilinear_value(s, a, d));
        }
        out
    }

    /// Left derivative with respect to the symbol c̄_d.
    fn left_dcbar(&self, s: &ExtendedState, d: usize) -> GrassmannElement {
        let g = s.generator_count();
        let mut out = GrassmannElement::scalar(g, Self::ghost_coeff(&self.cbar_linear, d, s));
        for b in 0..2 * self.n {
            out = &out + &s.c[b].scale(self.bilinear_value(s, d, b));
        }
        out
    }
}

fn unit(len: usize, a: usize) -> Vec<Expr> {
    (0..len).map(|i| if i == a { Expr::one() } else { Expr::zero() }).collect()
}

/// Evaluate a bosonic expression (or its derivative along `dvar`) at a state
/// whose λ may carry an even nilpotent part, Taylor-expanding in that part
/// to second order.
fn even_eval(e: &Expr, s: &ExtendedState, dvar: Option<usize>) -> GrassmannElement {
    let g = s.generator_count();
    let vars = s.bosonic_vars();
    let f = match dvar {
        Some(v) => e.diff(v),
        None => e.clone(),
    };
    let ghost_lam = s.lam_ghost.iter().any(|x| !x.is_zero());
    if !ghost_lam {
        return GrassmannElement::scalar(g, f.eval(&vars));
    }
    let jet = f.jet(&vars, 2);
    let off = 2 * s.n;
    let mut out = GrassmannElement::scalar(g, jet.value);
    for a in 0..2 * s.n {
        out = &out + &s.lam_ghost[a].scale(jet.grad[off + a]);
        for b in 0..2 * s.n {
            let h = jet.hess_at(off + a, off + b);
            if h != 0.0 {
                out = &out + &(&s.lam_ghost[a] * &s.lam_ghost[b]).scale(0.5 * h);
            }
        }
    }
    out
}

/// Extended Poisson bracket {A, B}, with {φ^a, λ_b} = δ^a_b and
/// {c̄_b, c^a} = −i δ^a_b.
pub fn epb(a: &ExtObservable, b: &ExtObservable, s: &ExtendedState) -> Result<GrassmannElement> {
    if a.n != s.n || b.n != s.n {
        return Err(KvnError::Dimension("observable and state disagree on n".into()));
    }
    let n = s.n;
    let mut out = GrassmannElement::zero(s.generator_count());
    for k in 0..2 * n {
        let da_phi = a.d_bosonic(s, k);
        let db_lam = b.d_bosonic(s, 2 * n + k);
        let da_lam = a.d_bosonic(s, 2 * n + k);
        let db_phi = b.d_bosonic(s, k);
        out = &out + &(&da_phi * &db_lam);
        out = &out - &(&da_lam * &db_phi);
    }
    let has_ghost = |o: &ExtObservable| !o.is_bosonic();
    if has_ghost(a) && has_ghost(b) {
        for d in 0..2 * n {
            let t1 = &a.right_dcbar(s, d) * &b.left_dc(s, d);
            let t2 = &a.right_dc(s, d) * &b.left_dcbar(s, d);
            out = &out + &(&t1 + &t2).scale(-I);
        }
    }
    Ok(out)
}

/// Time derivative of an extended state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateRate {
    pub phi: Vec<f64>,
    pub lam: Vec<f64>,
    pub lam_ghost: Vec<GrassmannElement>,
    pub c: Vec<GrassmannElement>,
    pub cbar: Vec<GrassmannElement>,
}

/// Equations of motion on the extended space:
/// φ̇ = ω∂H, ċ = ω∂∂H c, ċ̄_b = −c̄_a ω^{ac} ∂_c∂_b H,
/// λ̇_b = −ω^{ac} ∂_c∂_b H λ_a − i c̄_a ω^{ac} ∂_c∂_d∂_b H c^d.
pub fn eom(h: &dyn Observable, s: &ExtendedState) -> StateRate {
    let n = s.n;
    let d = 2 * n;
    let g = s.generator_count();
    let ghosts = s.has_ghosts();
    let jet = h.jet(&s.phi, if ghosts { 3 } else { 2 });
    let mut r = StateRate {
        phi: vec![0.0; d],
        lam: vec![0.0; d],
        lam_ghost: vec![GrassmannElement::zero(g); d],
        c: vec![GrassmannElement::zero(g); d],
        cbar: vec![GrassmannElement::zero(g); d],
    };
    for a in 0..d {
        let (pa, w) = omega_partner(n, a);
        r.phi[a] = w * jet.grad[pa];
    }
    for b in 0..d {
        let mut lam_b = 0.0;
        for a in 0..d {
            let (ca, w) = omega_partner(n, a);
            lam_b -= w * jet.hess_at(ca, b) * s.lam[a];
        }
        r.lam[b] = lam_b;
    }
    if !ghosts {
        return r;
    }
    for a in 0..d {
        let (pa, w) = omega_partner(n, a);
        for dd in 0..d {
            let hv = w * jet.hess_at(pa, dd);
            if hv != 0.0 {
                r.c[a] = &r.c[a] + &s.c[dd].scale(hv);
                // ċ̄_b gets −c̄_a ω^{a pa} H_{pa b}; here b = dd
                r.cbar[dd] = &r.cbar[dd] - &s.cbar[a].scale(hv);
                r.lam_ghost[dd] = &r.lam_ghost[dd] - &s.lam_ghost[a].scale(hv);
            }
        }
    }
    for b in 0..d {
        let mut src = GrassmannElement::zero(g);
        for a in 0..d {
            let (ca, w) = omega_partner(n, a);
            for dd in 0..d {
                let t = jet.third_at(ca, dd, b);
                if t != 0.0 {
                    src = &src + &(&s.cbar[a] * &s.c[dd]).scale(-I * w * t);
                }
            }
        }
        r.lam_ghost[b] = &r.lam_ghost[b] + &src;
    }
    r
}

fn advance(s: &ExtendedState, k: &StateRate, h: f64) -> ExtendedState {
    let mut out = s.clone();
    for a in 0..2 * s.n {
        out.phi[a] += h * k.phi[a];
        out.lam[a] += h * k.lam[a];
        if !k.c[a].is_zero() {
            out.c[a] = &out.c[a] + &k.c[a].scale(h);
        }
        if !k.cbar[a].is_zero() {
            out.cbar[a] = &out.cbar[a] + &k.cbar[a].scale(h);
        }
        if !k.lam_ghost[a].is_zero() {
            out.lam_ghost[a] = &out.lam_ghost[a] + &k.lam_ghost[a].scale(h);
        }
    }
    out
}

/// One classical RK4 step on the extended state.
pub fn rk4_step(h: &dyn Observable, s: &ExtendedState, dt: f64) -> ExtendedState {
    let k1 = eom(h, s);
    let k2 = eom(h, &advance(s, &k1, dt / 2.0));
    let k3 = eom(h, &advance(s, &k2, dt / 2.0));
    let k4 = eom(h, &advance(s, &k3, dt));
    let mut out = advance(s, &k1, dt / 6.0);
    out = advance(&out, &k2, dt / 3.0);
    out = advance(&out, &k3, dt / 3.0);
    advance(&out, &k4, dt / 6.0)
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<ExtendedState>,
}

/// Fixed-step RK4 over `steps` steps; the trajectory includes the initial state.
pub fn integrate(h: &dyn Observable, s0: &ExtendedState, dt: f64, steps: usize) -> Result<Trajectory> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(KvnError::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(s0.clone());
    let mut s = s0.clone();
    for k in 1..=steps {
        s = rk4_step(h, &s, dt);
        if !s.is_finite() {
            return Err(KvnError::NonFinite { step: k, detail: format!("phi = {:?}", s.phi) });
        }
        times.push(k as f64 * dt);
        states.push(s.clone());
    }
    Ok(Trajectory { times, states })
}

impl Trajectory {
    pub fn last(&self) -> &ExtendedState {
        self.states.last().unwrap()
    }

    /// CSV with columns t, q_i, p_i, lambda_q_i, lambda_p_i and, optionally,
    /// the real parts of the ghost coefficients on the bare generators.
    pub fn write_csv<W: Write>(&self, mut w: W, ghosts: bool) -> Result<()> {
        let s0 = &self.states[0];
        let n = s0.n;
        let mut header = vec!["t".to_string()];
        for i in 0..n {
            header.push(format!("q{}", i + 1));
        }
        for i in 0..n {
            header.push(format!("p{}", i + 1));
        }
        for i in 0..n {
            header.push(format!("lambda_q{}", i + 1));
        }
        for i in 0..n {
            header.push(format!("lambda_p{}", i + 1));
        }
        if ghosts {
            for a in 0..2 * n {
                for b in 0..2 * n {
                    header.push(format!("c{a}_{b}"));
                }
            }
        }
        writeln!(w, "{}", header.join(","))?;
        for (t, s) in self.times.iter().zip(&self.states) {
            let mut row = vec![format!("{t:.10e}")];
            row.extend(s.phi.iter().chain(&s.lam).map(|x| format!("{x:.12e}")));
            if ghosts {
                for a in 0..2 * n {
                    for b in 0..2 * n {
                        let c = s.c[a].coefficient(1 << crate::state::c_gen(b)).re;
                        row.push(format!("{c:.12e}"));
                    }
                }
            }
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Tangent map of the φ-flow, read off the ghost coefficients of a state
/// that started with c^a equal to the bare generators.
pub fn tangent_matrix(s: &ExtendedState) -> Vec<Vec<f64>> {
    let d = 2 * s.n;
    (0..d)
        .map(|a| (0..d).map(|b| s.c[a].coefficient(1 << crate::state::c_gen(b)).re).collect())
        .collect()
}

/// Hamilton's equations for the φ block alone, compiled for speed.
#[derive(Clone, Debug)]
pub struct HamiltonFlow {
    n: usize,
    velocity: Vec<Compiled>,
}

impl HamiltonFlow {
    pub fn new(h: &Expr, n: usize) -> Self {
        let velocity = (0..2 * n)
            .map(|a| {
                let (b, w) = omega_partner(n, a);
                (h.diff(b) * w).compile()
            })
            .collect();
        HamiltonFlow { n, velocity }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rate(&self, phi: &[f64], out: &mut [f64], stack: &mut Vec<f64>) {
        for (o, v) in out.iter_mut().zip(&self.velocity) {
            *o = v.eval_with(phi, stack);
        }
    }

    /// RK4 flow over time `t` (any sign) in `steps` steps.
    pub fn flow(&self, phi0: &[f64], t: f64, steps: usize) -> Vec<f64> {
        let d = phi0.len();
        let steps = steps.max(1);
        let h = t / steps as f64;
        let mut stack = Vec::new();
        let mut x = phi0.to_vec();
        let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d]);
        let mut tmp = vec![0.0; d];
        for _ in 0..steps {
            self.rate(&x, &mut k1, &mut stack);
            for i in 0..d {
                tmp[i] = x[i] + 0.5 * h * k1[i];
            }
            self.rate(&tmp, &mut k2, &mut stack);
            for i in 0..d {
                tmp[i] = x[i] + 0.5 * h * k2[i];
            }
            self.rate(&tmp, &mut k3, &mut stack);
            for i in 0..d {
                tmp[i] = x[i] + h * k3[i];
            }
            self.rate(&tmp, &mut k4, &mut stack);
            for i in 0..d {
                x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        x
    }
}
