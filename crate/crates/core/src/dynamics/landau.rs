use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{epb, ExtObservable};
use crate::error::{KvnError, Result};
use crate::expr::Expr;
use crate::state::ExtendedState;

/// H = [p_x² + (p_y − eBx/c)² + p_z²]/2m in the gauge A = (0, Bx, 0).
/// Variables: x, y, z, p_x, p_y, p_z.
pub fn landau_hamiltonian(b: f64, e: f64, m: f64, c_light: f64) -> Expr {
    let x = Expr::var(0);
    let (px, py, pz) = (Expr::var(3), Expr::var(4), Expr::var(5));
    let k = e * b / c_light;
    (px.sq() + (py - x * k).sq() + pz.sq()) / (2.0 * m)
}

/// Largest bracket residuals seen over the sampled states.
#[derive(Clone, Debug, Serialize)]
pub struct LandauConstants {
    pub samples: usize,
    pub x0: f64,
    pub y0: f64,
    pub larmor_radius_sq: f64,
    /// max |{x, ℋ} − p_x/m|
    pub x_rate: f64,
    /// max |{v_y, ℋ} + (eB/m²c) p_x|
    pub vy_rate: f64,
    /// min |{x, ℋ}|, nonzero at generic states
    pub x_min_bracket: f64,
}

pub struct LandauObservables {
    pub cal_h: ExtObservable,
    pub x0: Expr,
    pub y0: Expr,
    pub rho2: Expr,
    pub vx: Expr,
    pub vy: Expr,
}

/// ℋ, the guiding centre (x₀, y₀) and ϱ² as observables over the 12
/// bosonic variables.
pub fn landau_observables(b: f64, e: f64, m: f64, c_light: f64) -> Result<LandauObservables> {
    if b == 0.0 || e == 0.0 {
        return Err(KvnError::InvalidParameter("field and charge must be nonzero (omega = eB/mc)".into()));
    }
    if m <= 0.0 || c_light <= 0.0 {
        return Err(KvnError::InvalidParameter("mass and c must be positive".into()));
    }
    let omega = e * b / (m * c_light);
    let h = landau_hamiltonian(b, e, m, c_light);
    let (x, y) = (Expr::var(0), Expr::var(1));
    let vx = Expr::var(3) / m;
    let vy = (Expr::var(4) - x.clone() * (e * b / c_light)) / m;
    Ok(LandauObservables {
        cal_h: ExtObservable::cal(&h, 3),
        x0: x + vy.clone() / omega,
        y0: y - vx.clone() / omega,
        rho2: (vx.sq() + vy.sq()) / (omega * omega),
        vx,
        vy,
    })
}

/// Brackets of x₀, y₀ and ϱ² with ℋ at `samples` random states drawn from
/// a seeded generator.
pub fn check_constants_landau(b: f64, e: f64, m: f64, c_light: f64, samples: usize, seed: u64) -> Result<LandauConstants> {
    let obs = landau_observables(b, e, m, c_light)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = LandauConstants {
        samples,
        x0: 0.0,
        y0: 0.0,
        larmor_radius_sq: 0.0,
        x_rate: 0.0,
        vy_rate: 0.0,
        x_min_bracket: f64::INFINITY,
    };
    let bos = |e: &Expr| ExtObservable::bosonic(3, e.clone());
    for _ in 0..samples {
        let phi: Vec<f64> = (0..6).map(|_| rng.random_range(-2.0..2.0)).collect();
        let lam: Vec<f64> = (0..6).map(|_| rng.random_range(-2.0..2.0)).collect();
        let s = ExtendedState::bosonic(phi.clone(), lam)?;
        let br = |o: &Expr| -> Result<f64> { Ok(epb(&bos(o), &obs.cal_h, &s)?.max_abs()) };
        rep.x0 = rep.x0.max(br(&obs.x0)?);
        rep.y0 = rep.y0.max(br(&obs.y0)?);
        rep.larmor_radius_sq = rep.larmor_radius_sq.max(br(&obs.rho2)?);
        let xb = epb(&ExtObservable::phi(3, 0), &obs.cal_h, &s)?.body().re;
        rep.x_rate = rep.x_rate.max((xb - phi[3] / m).abs());
        rep.x_min_bracket = rep.x_min_bracket.min(xb.abs());
        let vyb = epb(&bos(&obs.vy), &obs.cal_h, &s)?.body().re;
        rep.vy_rate = rep.vy_rate.max((vyb + e * b / (m * m * c_light) * phi[3]).abs());
    }
    Ok(rep)
}
