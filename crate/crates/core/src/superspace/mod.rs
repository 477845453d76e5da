//! Grassmann algebra over {θ, θ̄, c^a, c̄_a}, Berezin integration and the
//! superfield expansion of phase-space observables.

mod grassmann;

pub use grassmann::{monomial_sign, GrassmannElement};

use num_complex::Complex64;

use crate::expr::{Expr, Jet3};
use crate::state::{c_gen, cbar_gen, omega, omega_partner, ExtendedState, THETA, THETABAR};

/// Anything that can report value and derivatives at a phase-space point.
pub trait Observable: Sync {
    fn jet(&self, point: &[f64], order: u8) -> Jet3;
}

impl Observable for Expr {
    fn jet(&self, point: &[f64], order: u8) -> Jet3 {
        Expr::jet(self, point, order)
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Φ^a = φ^a + θ c^a + θ̄ ω^{ab} c̄_b + i θ̄θ ω^{ab} λ_b, stored by component.
#[derive(Clone, Debug, PartialEq)]
pub struct Superfield {
    pub n: usize,
    pub body: Vec<f64>,
    pub theta_coeff: Vec<GrassmannElement>,
    pub thetabar_coeff: Vec<GrassmannElement>,
    pub top_coeff: Vec<GrassmannElement>,
}

/// The four θ-components of one superfield entry.
#[derive(Clone, Debug, PartialEq)]
pub struct Components {
    pub body: GrassmannElement,
    pub theta: GrassmannElement,
    pub thetabar: GrassmannElement,
    pub thetabar_theta: GrassmannElement,
}

impl Superfield {
    pub fn from_state(s: &ExtendedState) -> Self {
        let n = s.n;
        let mut thetabar_coeff = Vec::with_capacity(2 * n);
        let mut top_coeff = Vec::with_capacity(2 * n);
        for a in 0..2 * n {
            let (b, w) = omega_partner(n, a);
            thetabar_coeff.push(s.cbar[b].scale(w));
            top_coeff.push(s.lam_element(b).scale(I * w));
        }
        Superfield {
            n,
            body: s.phi.clone(),
            theta_coeff: s.c.clone(),
            thetabar_coeff,
            top_coeff,
        }
    }

    pub fn generator_count(&self) -> usize {
        crate::state::generator_count(self.n)
    }

    /// Φ^a as a single Grassmann element.
    pub fn component(&self, a: usize) -> GrassmannElement {
        let g = self.generator_count();
        let theta = GrassmannElement::generator(g, THETA).unwrap();
        let thetabar = GrassmannElement::generator(g, THETABAR).unwrap();
        let tbt = &thetabar * &theta;
        let mut out = GrassmannElement::scalar(g, self.body[a]);
        out = &out + &(&theta * &self.theta_coeff[a]);
        out = &out + &(&thetabar * &self.thetabar_coeff[a]);
        &out + &(&tbt * &self.top_coeff[a])
    }

    /// Split an element into its body, θ, θ̄ and θ̄θ coefficients (all
    /// coefficients free of θ and θ̄).
    pub fn extract(e: &GrassmannElement) -> Components {
        let g = e.generator_count();
        let t = 1u64 << THETA;
        let tb = 1u64 << THETABAR;
        let mut out = Components {
            body: GrassmannElement::zero(g),
            theta: GrassmannElement::zero(g),
            thetabar: GrassmannElement::zero(g),
            thetabar_theta: GrassmannElement::zero(g),
        };
        for (m, c) in e.terms() {
            let rest = m & !(t | tb);
            match (m & t != 0, m & tb != 0) {
                (false, false) => out.body.add_term(rest, c),
                (true, false) => out.theta.add_term(rest, c),
                (false, true) => out.thetabar.add_term(rest, c),
                // θθ̄G is canonical; θ̄θG = -θθ̄G
                (true, true) => out.thetabar_theta.add_term(rest, -c),
            }
        }
        out
    }
}

/// i × (coefficient of θ̄θ), with the measure ∫dθ dθ̄ (θ̄θ) = 1.
pub fn berezin(e: &GrassmannElement) -> GrassmannElement {
    Superfield::extract(e).thetabar_theta.scale(I)
}

/// Result of substituting the superfield into an observable.
#[derive(Clone, Debug, PartialEq)]
pub struct Lift {
    pub value: f64,
    pub n_o: GrassmannElement,
    pub nbar_o: GrassmannElement,
    pub cal_o: GrassmannElement,
    pub expansion: GrassmannElement,
}

/// Expand O(Φ) = O(φ) + θ N − θ̄ N̄ + iθθ̄ 𝒪. The Taylor series stops at
/// second order since δ^a = Φ^a − φ^a is nilpotent of degree three.
pub fn lift(o: &dyn Observable, s: &ExtendedState) -> Lift {
    let sf = Superfield::from_state(s);
    let g = sf.generator_count();
    let d = 2 * s.n;
    let jet = o.jet(&s.phi, 2);
    let deltas: Vec<GrassmannElement> = (0..d)
        .map(|a| {
            let mut e = sf.component(a);
            e.add_term(0, Complex64::new(-s.phi[a], 0.0));
            e
        })
        .collect();
    let mut acc = GrassmannElement::zero(g);
    for a in 0..d {
        acc = &acc + &deltas[a].scale(jet.grad[a]);
        for b in 0..d {
            let h = jet.hess_at(a, b);
            if h != 0.0 {
                acc = &acc + &(&deltas[a] * &deltas[b]).scale(0.5 * h);
            }
        }
    }
    let parts = Superfield::extract(&acc);
    let mut expansion = acc.clone();
    expansion.add_term(0, Complex64::new(jet.value, 0.0));
    Lift {
        value: jet.value,
        n_o: parts.theta,
        nbar_o: parts.thetabar.scale(-1.0),
        cal_o: berezin(&acc),
        expansion,
    }
}

/// 𝒪 = λ_a ω^{ab} ∂_b O + i c̄_a ω^{ad} (∂_d ∂_b O) c^b, evaluated directly.
pub fn cal_formula(o: &dyn Observable, s: &ExtendedState) -> GrassmannElement {
    let n = s.n;
    let g = s.generator_count();
    let jet = o.jet(&s.phi, 2);
    let mut out = GrassmannElement::zero(g);
    for a in 0..2 * n {
        let (b, w) = omega_partner(n, a);
        out = &out + &s.lam_element(a).scale(w * jet.grad[b]);
        for bb in 0..2 * n {
            let h = jet.hess_at(b, bb);
            if h != 0.0 {
                out = &out + &(&s.cbar[a] * &s.c[bb]).scale(I * w * h);
            }
        }
    }
    out
}

/// Bosonic part of 𝒪 as an expression over (φ, λ): Σ λ_a ω^{ab} ∂_b O.
/// Variables 0..2n are φ and 2n..4n are λ.
pub fn bosonic_cal(o: &Expr, n: usize) -> Expr {
    Expr::sum((0..2 * n).map(|a| {
        let (b, w) = omega_partner(n, a);
        Expr::var(2 * n + a) * (o.diff(b) * w)
    }))
}

/// Grassmann element of the bare generator c^a.
pub fn c_generator(n: usize, a: usize) -> GrassmannElement {
    GrassmannElement::generator(crate::state::generator_count(n), c_gen(a)).unwrap()
}

/// Grassmann element of the bare generator c̄_a.
pub fn cbar_generator(n: usize, a: usize) -> GrassmannElement {
    GrassmannElement::generator(crate::state::generator_count(n), cbar_gen(n, a)).unwrap()
}

/// ω as a dense matrix.
pub fn omega_matrix(n: usize) -> Vec<Vec<f64>> {
    (0..2 * n).map(|a| (0..2 * n).map(|b| omega(n, a, b)).collect()).collect()
}
