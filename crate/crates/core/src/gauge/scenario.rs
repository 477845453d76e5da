use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{couple_cal_h, couple_h, gauge_transform_state, velocity_evolution_check, ChargedParticle, GaugeField, GaugeParam, VelocityReport};
use crate::config::ConfigFile;
use crate::error::{KvnError, Result};
use crate::expr::{parse, Expr};
use crate::state::ExtendedState;
use crate::superspace::bosonic_cal;

const KEYS: &[(&str, &[&str])] = &[
    ("particle", &["n", "mass", "potential"]),
    ("field", &["charge", "c", "A1", "A2", "A3", "scalar"]),
    ("gauge", &["alpha"]),
    ("check", &["states", "seed", "tolerance", "range"]),
];

/// A gauge-check scenario read from a sectioned key=value file:
///
/// ```text
/// [particle]
/// n = 3
/// mass = 1
/// potential = 0.5*z^2
/// [field]
/// charge = 1
/// c = 1
/// A1 = -0.5*y
/// A2 = 0.5*x
/// scalar = 0
/// [gauge]
/// alpha = x^2/2 + sin(y)*t
/// [check]
/// states = 20
/// seed = 7
/// tolerance = 1e-8
/// ```
///
/// Expressions use x, y, z for the coordinates and t for time.
#[derive(Clone, Debug)]
pub struct GaugeScenario {
    pub particle: ChargedParticle,
    pub field: GaugeField,
    pub alpha: GaugeParam,
    pub states: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub range: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    /// max |berezin∘lift∘couple_H − couple_ℋ|
    pub route_residual: f64,
    /// max |couple_ℋ before − after the paired transformation|
    pub invariance_residual: f64,
    pub velocity: VelocityReport,
    pub tolerance: f64,
    pub passed: bool,
}

const NAMES: [&str; 3] = ["x", "y", "z"];

impl GaugeScenario {
    pub fn parse(text: &str) -> Result<Self> {
        GaugeScenario::from_config(&ConfigFile::parse(text)?)
    }

    pub fn from_config(cfg: &ConfigFile) -> Result<Self> {
        cfg.check_keys(KEYS)?;
        let n: usize = cfg.get_parsed("particle", "n")?.unwrap_or(3);
        if !(1..=3).contains(&n) {
            return Err(KvnError::InvalidParameter(format!("n must be 1, 2 or 3, got {n}")));
        }
        let mut vars: Vec<&str> = NAMES[..n].to_vec();
        let qvars = vars.clone();
        vars.push("t");
        let mass: f64 = cfg.get_parsed("particle", "mass")?.unwrap_or(1.0);
        if !(mass > 0.0) {
            return Err(KvnError::InvalidParameter("mass must be positive".into()));
        }
        let particle = match cfg.get("particle", "potential") {
            Some(src) => ChargedParticle::with_potential(n, mass, parse(src, &qvars)?),
            None => ChargedParticle::free(n, mass),
        };
        let charge: f64 = cfg.get_parsed("field", "charge")?.unwrap_or(1.0);
        let c: f64 = cfg.get_parsed("field", "c")?.unwrap_or(1.0);
        let comps = (0..n)
            .map(|i| match cfg.get("field", ["A1", "A2", "A3"][i]) {
                Some(src) => parse(src, &vars),
                None => Ok(Expr::zero()),
            })
            .collect::<Result<Vec<_>>>()?;
        if cfg.get("field", "A3").is_some() && n < 3 || cfg.get("field", "A2").is_some() && n < 2 {
            return Err(KvnError::Parse("field component beyond the particle dimension".into()));
        }
        let mut field = GaugeField::new(comps, charge, c)?;
        if let Some(src) = cfg.get("field", "scalar") {
            field = field.with_scalar_potential(parse(src, &vars)?)?;
        }
        let alpha = match cfg.get("gauge", "alpha") {
            Some(src) => GaugeParam::new(n, parse(src, &vars)?)?,
            None => GaugeParam::zero(n),
        };
        let tolerance: f64 = cfg.get_parsed("check", "tolerance")?.unwrap_or(1e-8);
        let range: f64 = cfg.get_parsed("check", "range")?.unwrap_or(1.5);
        if !(tolerance > 0.0) || !(range > 0.0) {
            return Err(KvnError::InvalidParameter("tolerance and range must be positive".into()));
        }
        Ok(GaugeScenario {
            particle,
            field,
            alpha,
            states: cfg.get_parsed("check", "states")?.unwrap_or(20),
            seed: cfg.get_parsed("check", "seed")?.unwrap_or(1),
            tolerance,
            range,
        })
    }

    pub fn random_states(&self) -> Vec<ExtendedState> {
        let n = self.particle.n;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let r = self.range;
        (0..self.states)
            .map(|_| {
                let phi = (0..2 * n).map(|_| rng.random_range(-r..r)).collect();
                let lam = (0..2 * n).map(|_| rng.random_range(-r..r)).collect();
                ExtendedState::bosonic(phi, lam).expect("dimensions agree")
            })
            .collect()
    }

    pub fn run(&self) -> Result<ScenarioReport> {
        let n = self.particle.n;
        let states = self.random_states();
        let k = self.field.coupling();
        let lifted = bosonic_cal(&couple_h(&self.particle.hamiltonian(), &self.field), n);
        let primed = self.field.gauge_transformed(&self.alpha)?;
        let a0 = GaugeParam::new(n, self.alpha.alpha.substitute(&|i| if i == n { Expr::zero() } else { Expr::var(i) }))?;
        let dt_alpha = self.alpha.alpha.diff(n).substitute(&|i| if i == n { Expr::zero() } else { Expr::var(i) });
        let moving = bosonic_cal(&(dt_alpha * k), n);
        let mut route: f64 = 0.0;
        let mut inv: f64 = 0.0;
        for s in &states {
            let direct = couple_cal_h(&self.particle, &self.field, s)?;
            let mut x = s.phi.clone();
            x.extend_from_slice(&s.lam);
            route = route.max((lifted.eval(&x) - direct).abs());
            // a time-dependent map contributes the lift of (e/c)∂_tα, which
            // cancels the λ_p·∇ term that Φ' = Φ − (1/c)∂_tα brings in
            let moved = gauge_transform_state(s, &a0, k)?;
            let after = couple_cal_h(&self.particle, &primed, &moved)? + moving.eval(&x);
            inv = inv.max((after - direct).abs());
        }
        let velocity = velocity_evolution_check(&self.particle, &self.field, &self.alpha, &states)?;
        let tol = self.tolerance;
        let passed = route <= tol
            && inv <= tol
            && velocity.max_residual <= tol
            && velocity.max_full_transform <= tol
            && (n != 3 || velocity.max_lorentz_residual <= tol);
        Ok(ScenarioReport { route_residual: route, invariance_residual: inv, velocity, tolerance: tol, passed })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_run_uniform_field() {
        let s = GaugeScenario::parse(
            "[particle]\nn = 3\nmass = 2\n[field]\ncharge = 1.5\nc = 3\nA2 = 0.7*x\n[gauge]\nalpha = x^2/2 + x*y\n[check]\nstates = 10\nseed = 3\n",
        )
        .unwrap();
        let r = s.run().unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(GaugeScenario::parse("[particle]\nspin = 1\n").is_err());
        assert!(GaugeScenario::parse("[other]\nx = 1\n").is_err());
        assert!(GaugeScenario::parse("[particle]\nn = 1\n[field]\nA2 = x\n").is_err());
    }
}
