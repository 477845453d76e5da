//! The extended phase-space state shared by the superspace and dynamics code.

use num_complex::Complex64;

use crate::error::{KvnError, Result};
use crate::superspace::GrassmannElement;

/// Number of Grassmann generators for `n` degrees of freedom: θ, θ̄, c^a, c̄_a.
pub fn generator_count(n: usize) -> usize {
    2 + 4 * n
}

pub const THETA: usize = 0;
pub const THETABAR: usize = 1;

/// Generator index of c^a.
pub fn c_gen(a: usize) -> usize {
    2 + a
}

/// Generator index of c̄_a.
pub fn cbar_gen(n: usize, a: usize) -> usize {
    2 + 2 * n + a
}

/// Standard symplectic matrix entry ω^{ab}, with φ = (q_1..q_n, p_1..p_n)
/// and ω^{q_i p_i} = +1.
pub fn omega(n: usize, a: usize, b: usize) -> f64 {
    if a < n && b == a + n {
        1.0
    } else if a >= n && b + n == a {
        -1.0
    } else {
        0.0
    }
}

/// The only nonzero column of row `a` of ω, with its sign.
pub fn omega_partner(n: usize, a: usize) -> (usize, f64) {
    if a < n {
        (a + n, 1.0)
    } else {
        (a - n, -1.0)
    }
}

/// Point of the 8n-dimensional extended space (φ, λ, c, c̄).
///
/// `lam_ghost` holds the even, nilpotent part of λ generated by the
/// third-derivative ghost source of the λ equation; it is zero for any
/// state built from plain numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedState {
    pub n: usize,
    pub phi: Vec<f64>,
    pub lam: Vec<f64>,
    pub lam_ghost: Vec<GrassmannElement>,
    pub c: Vec<GrassmannElement>,
    pub cbar: Vec<GrassmannElement>,
}

impl ExtendedState {
    /// State with all ghosts zero.
    pub fn bosonic(phi: Vec<f64>, lam: Vec<f64>) -> Result<Self> {
        let n = check_lengths(&phi, &lam)?;
        let z = GrassmannElement::zero(generator_count(n));
        Ok(ExtendedState {
            n,
            lam_ghost: vec![z.clone(); 2 * n],
            c: vec![z.clone(); 2 * n],
            cbar: vec![z; 2 * n],
            phi,
            lam,
        })
    }

    /// State whose ghosts are the bare generators: c^a = c^a, c̄_a = c̄_a.
    pub fn with_unit_ghosts(phi: Vec<f64>, lam: Vec<f64>) -> Result<Self> {
        let n = check_lengths(&phi, &lam)?;
        let id: Vec<Vec<f64>> = (0..2 * n)
            .map(|a| (0..2 * n).map(|b| if a == b { 1.0 } else { 0.0 }).collect())
            .collect();
        ExtendedState::with_ghost_matrices(phi, lam, &id, &id)
    }

    /// c^a = Σ_b cm[a][b] c^b, c̄_a = Σ_b cbm[a][b] c̄_b over the bare generators.
    pub fn with_ghost_matrices(
        phi: Vec<f64>,
        lam: Vec<f64>,
        cm: &[Vec<f64>],
        cbm: &[Vec<f64>],
    ) -> Result<Self> {
        let mut s = ExtendedState::bosonic(phi, lam)?;
        let n = s.n;
        let g = generator_count(n);
        if cm.len() != 2 * n || cbm.len() != 2 * n {
            return Err(KvnError::Dimension("ghost matrices must be 2n x 2n".into()));
        }
        for a in 0..2 * n {
            let mut c = GrassmannElement::zero(g);
            let mut cb = GrassmannElement::zero(g);
            for b in 0..2 * n {
                c.add_term(1 << c_gen(b), Complex64::new(cm[a][b], 0.0));
                cb.add_term(1 << cbar_gen(n, b), Complex64::new(cbm[a][b], 0.0));
            }
            s.c[a] = c;
            s.cbar[a] = cb;
        }
        Ok(s)
    }

    pub fn generator_count(&self) -> usize {
        generator_count(self.n)
    }

    pub fn has_ghosts(&self) -> bool {
        self.c.iter().chain(&self.cbar).chain(&self.lam_ghost).any(|e| !e.is_zero())
    }

    /// λ_a including its nilpotent part, as an even Grassmann element.
    pub fn lam_element(&self, a: usize) -> GrassmannElement {
        let mut e = self.lam_ghost[a].clone();
        e.add_term(0, Complex64::new(self.lam[a], 0.0));
        e
    }

    /// The bosonic variables (φ, λ) as one vector of length 4n.
    pub fn bosonic_vars(&self) -> Vec<f64> {
        let mut v = self.phi.clone();
        v.extend_from_slice(&self.lam);
        v
    }

    pub fn is_finite(&self) -> bool {
        self.phi.iter().chain(&self.lam).all(|x| x.is_finite())
            && self
                .c
                .iter()
                .chain(&self.cbar)
                .chain(&self.lam_ghost)
                .all(|e| e.terms().all(|(_, z)| z.re.is_finite() && z.im.is_finite()))
    }
}

fn check_lengths(phi: &[f64], lam: &[f64]) -> Result<usize> {
    if phi.is_empty() || !phi.len().is_multiple_of(2) || phi.len() != lam.len() {
        return Err(KvnError::Dimension(format!(
            "phi and lambda must have equal even length, got {} and {}",
            phi.len(),
            lam.len()
        )));
    }
    Ok(phi.len() / 2)
}
