use std::path::PathBuf;

use kvn_core::aharonov::{ab_level_table, operator_shift_residual, AbParams};
use kvn_core::dynamics::HamiltonFlow;
use kvn_core::expr::parse;
use kvn_core::gauge::GaugeScenario;
use kvn_core::grid::{Axis, PhaseGrid, WaveFunction};
use kvn_core::liouville::{build_liouvillian, evolve_characteristics, evolve_spectral, GridOperator};
use kvn_core::spectra::{kvn_oscillator, landau_spectrum_kvn, landau_spectrum_quantum, LandauParams};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::cli::{AbArgs, BesselArgs, EvolveArgs, GaugeArgs, LandauArgs, Method, OscillatorArgs};
use crate::output::{num, Cell, Outcome, Table};
use crate::settings::{require, CliError, Settings};
use crate::values::{RealList, Span};

/// The scenario used when none is given: uniform field along z in the
/// symmetric gauge, a confining z potential and a time-dependent α.
pub const DEFAULT_SCENARIO: &str = "\
[particle]
n = 3
mass = 1
potential = 0.5*z^2
[field]
charge = 1
c = 1
A1 = -0.5*y
A2 = 0.5*x
[gauge]
alpha = x^2/2 + sin(y)*t
[check]
states = 20
seed = 7
tolerance = 1e-8
";

fn params(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn positive(v: f64, what: &str) -> Result<(), CliError> {
    require(v > 0.0 && v.is_finite(), || format!("{what} must be positive and finite, got {v}"))
}

pub fn oscillator(a: OscillatorArgs, s: &Settings) -> Result<Outcome, CliError> {
    let span: Span = s.pick(a.big_n, "N", Span { lo: -3, hi: 3 })?;
    let omega = s.pick(a.omega, "omega", 1.0)?;
    let mass = s.pick(a.mass, "mass", 1.0)?;
    let delta = s.pick(a.delta, "delta", 1.0)?;
    let grid = s.pick(a.grid, "grid", 128)?;
    let tol = s.pick(a.tolerance, "tolerance", 1e-6)?;
    positive(tol, "tolerance")?;

    let pairs = span
        .range()
        .map(|big_n| kvn_oscillator(big_n, (-big_n).max(0) as u32, delta, mass, omega))
        .collect::<Result<Vec<_>, _>>()?;
    let residuals = pairs
        .par_iter()
        .map(|p| p.natural_grid(grid).and_then(|g| p.grid_residual(&g)))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(&["N", "n", "eigenvalue", "grid_residual"]);
    for (p, r) in pairs.iter().zip(&residuals) {
        table.push(vec![Cell::Int(p.big_n), Cell::Int(p.n as i64), Cell::Num(p.eigenvalue), Cell::Num(*r)]);
    }
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    let failure = (worst > tol).then(|| format!("grid residual {} exceeds {}", num(worst), num(tol)));
    Ok(Outcome {
        table,
        parameters: params(json!({"N": span.to_string(), "omega": omega, "mass": mass, "delta": delta, "grid": grid, "tolerance": tol})),
        extra: Map::new(),
        summary: format!(
            "oscillator: {} eigenvalues N*omega for N = {span}, omega = {omega}; max grid residual {}",
            pairs.len(),
            num(worst)
        ),
        failure,
    })
}

pub fn landau(a: LandauArgs, s: &Settings) -> Result<Outcome, CliError> {
    let p = LandauParams {
        b: s.pick(a.b, "b", 1.0)?,
        charge: s.pick(a.charge, "charge", 1.0)?,
        mass: s.pick(a.mass, "mass", 1.0)?,
        c_light: s.pick(a.c_light, "c-light", 1.0)?,
        hbar: s.pick(a.hbar, "hbar", 1.0)?,
    };
    let n_max = s.pick(a.n_max, "n-max", 4)?;
    let pz = s.pick(a.pz, "pz", 0.5)?;
    let lz = s.pick(a.lambda_z, "lambda-z", 1.0)?;
    let span: Span = s.pick(a.big_n, "N", Span { lo: -2, hi: 2 })?;
    let delta = s.pick(a.delta, "delta", 1.0)?;
    let grid = s.pick(a.grid, "grid", 64)?;
    let tol = s.pick(a.tolerance, "tolerance", 1e-6)?;
    positive(tol, "tolerance")?;

    let quantum = landau_spectrum_quantum(n_max, pz, &p)?;
    let kvn = landau_spectrum_kvn(span.range(), lz, pz, &p, delta, grid)?;

    let mut table = Table::new(&["spectrum", "label", "eigenvalue", "independent_labels", "max_residual"]);
    for (n, e) in quantum.iter().enumerate() {
        table.push(vec![Cell::Text("quantum".into()), Cell::Int(n as i64), Cell::Num(*e), Cell::Empty, Cell::Empty]);
    }
    let mut failure = None;
    let mut min_labels = usize::MAX;
    for lvl in &kvn {
        let c = &lvl.certificate;
        let labels = c.independent_labels(tol);
        min_labels = min_labels.min(labels);
        if labels < 4 || c.max_residual > tol {
            failure.get_or_insert(format!(
                "N = {}: {labels} independent labels, max residual {}",
                lvl.big_n,
                num(c.max_residual)
            ));
        }
        table.push(vec![
            Cell::Text("kvn".into()),
            Cell::Int(lvl.big_n),
            Cell::Num(lvl.eigenvalue),
            Cell::Int(labels as i64),
            Cell::Num(c.max_residual),
        ]);
    }
    let certs: Vec<_> = kvn.iter().map(|l| &l.certificate).collect();
    let mut extra = Map::new();
    extra.insert("certificates".into(), serde_json::to_value(certs).map_err(|e| CliError::Io(e.to_string()))?);
    let spacing = p.hbar * p.omega();
    Ok(Outcome {
        table,
        parameters: params(json!({
            "b": p.b, "charge": p.charge, "mass": p.mass, "c-light": p.c_light, "hbar": p.hbar,
            "n-max": n_max, "pz": pz, "lambda-z": lz, "N": span.to_string(), "delta": delta, "grid": grid, "tolerance": tol
        })),
        extra,
        summary: format!(
            "landau: quantum spacing {} with p_y0 the only degenerate label; KvN levels for N = {span} each degenerate in {} labels",
            num(spacing),
            if kvn.is_empty() { 0 } else { min_labels }
        ),
        failure,
    })
}

pub fn ab(a: AbArgs, s: &Settings) -> Result<Outcome, CliError> {
    let alphas = s.pick(a.flux_alpha, "flux-alpha", RealList(vec![0.1]))?;
    let ms: Span = s.pick(a.m, "m", Span::single(1))?;
    let ks: Span = s.pick(a.k, "k", Span::single(2))?;
    let ks = ks.indices(2).map_err(|e| CliError::Usage(format!("k: {e}; k = 1 is the zero at the origin")))?;
    let p = AbParams {
        hbar: s.pick(a.hbar, "hbar", 1.0)?,
        mu: s.pick(a.mu, "mu", 1.0)?,
        b: s.pick(a.b, "b", 1.0)?,
        charge: s.pick(a.charge, "charge", 1.0)?,
        c_light: s.pick(a.c_light, "c-light", 1.0)?,
    };
    require(p.charge != 0.0 && p.charge.is_finite(), || "charge must be non-zero".into())?;
    positive(p.c_light, "c-light")?;
    let pz = s.pick(a.pz, "pz", 0.0)?;
    let tests = s.pick(a.tests, "tests", 50)?;
    let seed = s.pick(a.seed, "seed", 1)?;
    let tol = s.pick(a.tolerance, "tolerance", 1e-10)?;
    positive(tol, "tolerance")?;
    require(tests > 0, || "tests must be at least 1".into())?;

    let mut table =
        Table::new(&["alpha", "k", "m", "order", "zero", "E_quantum", "classical_label_shift", "classical_residual"]);
    let mut worst: f64 = 0.0;
    let mut first = None;
    for (i, &alpha) in alphas.0.iter().enumerate() {
        let flux = p.alpha_to_flux(alpha);
        let residual = operator_shift_residual(flux, p.mu, p.charge, p.c_light, tests, seed + i as u64)?;
        worst = worst.max(residual);
        let shift = p.charge * flux / (2.0 * std::f64::consts::PI * p.c_light);
        for lvl in ab_level_table(alpha, ms.range(), ks.clone(), pz, &p)? {
            first.get_or_insert(lvl);
            table.push(vec![
                Cell::Num(alpha),
                Cell::Int(lvl.k as i64),
                Cell::Int(lvl.m),
                Cell::Num(lvl.order),
                Cell::Num(lvl.zero),
                Cell::Num(lvl.energy),
                Cell::Num(shift),
                Cell::Num(residual),
            ]);
        }
    }
    let head = match first {
        Some(l) => format!(
            "k = {}, m = {}, alpha = {}: zero {:.6}, E {:.6}",
            l.k, l.m, l.alpha, l.zero, l.energy
        ),
        None => "no admissible levels".into(),
    };
    let failure = (worst > tol).then(|| format!("classical operator shift residual {} exceeds {}", num(worst), num(tol)));
    Ok(Outcome {
        parameters: params(json!({
            "flux-alpha": alphas.0, "m": ms.to_string(), "k": format!("{}..{}", ks.start(), ks.end()),
            "hbar": p.hbar, "mu": p.mu, "b": p.b, "charge": p.charge, "c-light": p.c_light, "pz": pz,
            "tests": tests, "seed": seed, "tolerance": tol
        })),
        extra: Map::new(),
        summary: format!(
            "ab: {} level(s); {head}; classical spectrum unchanged up to a label shift (max operator residual {})",
            table.rows.len(),
            num(worst)
        ),
        table,
        failure,
    })
}

pub fn gauge_check(a: GaugeArgs, s: &Settings) -> Result<Outcome, CliError> {
    let path: Option<PathBuf> = s.pick_opt(a.scenario, "scenario")?;
    let text = match &path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => DEFAULT_SCENARIO.to_string(),
    };
    let mut sc = GaugeScenario::parse(&text).map_err(|e| match &path {
        Some(p) => CliError::Usage(format!("{}: {e}", p.display())),
        None => e.into(),
    })?;
    if let Some(v) = s.pick_opt(a.states, "states")? {
        sc.states = v;
    }
    if let Some(v) = s.pick_opt(a.seed, "seed")? {
        sc.seed = v;
    }
    if let Some(v) = s.pick_opt(a.tolerance, "tolerance")? {
        positive(v, "tolerance")?;
        sc.tolerance = v;
    }
    require(sc.states > 0, || "states must be at least 1".into())?;
    let r = sc.run()?;
    let tol = r.tolerance;
    let mut table = Table::new(&["check", "value", "tolerance", "passed"]);
    let mut add = |name: &str, v: f64| {
        table.push(vec![Cell::Text(name.into()), Cell::Num(v), Cell::Num(tol), Cell::Text((v <= tol).to_string())]);
    };
    add("lift_route", r.route_residual);
    add("invariance", r.invariance_residual);
    add("velocity_term", r.velocity.max_residual);
    add("full_transform", r.velocity.max_full_transform);
    if sc.particle.n == 3 {
        add("lorentz_force", r.velocity.max_lorentz_residual);
    }
    let mut extra = Map::new();
    extra.insert("report".into(), serde_json::to_value(&r).map_err(|e| CliError::Io(e.to_string()))?);
    let worst = r
        .route_residual
        .max(r.invariance_residual)
        .max(r.velocity.max_residual)
        .max(r.velocity.max_full_transform);
    Ok(Outcome {
        table,
        parameters: params(json!({
            "scenario": path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "built-in".into()),
            "states": sc.states, "seed": sc.seed, "tolerance": tol
        })),
        extra,
        summary: format!(
            "gauge-check: {} on {} states, worst residual {} (tolerance {})",
            if r.passed { "passed" } else { "FAILED" },
            sc.states,
            num(worst.max(if sc.particle.n == 3 { r.velocity.max_lorentz_residual } else { 0.0 })),
            num(tol)
        ),
        failure: (!r.passed).then(|| "gauge checks exceeded the tolerance".to_string()),
    })
}

pub fn evolve(a: EvolveArgs, s: &Settings) -> Result<Outcome, CliError> {
    let src = s.pick(a.hamiltonian, "hamiltonian", "p^2/2 + q^2/2".to_string())?;
    let method = s.pick(a.method, "method", Method::Spectral)?;
    let t = s.pick(a.t, "t", 1.0)?;
    let dt = s.pick(a.dt, "dt", 1e-3)?;
    let steps = s.pick(a.steps, "steps", 400)?;
    let count = s.pick(a.grid, "grid", 128)?;
    let half = s.pick(a.half, "half", 8.0)?;
    let q0 = s.pick(a.q0, "q0", 1.5)?;
    let p0 = s.pick(a.p0, "p0", 0.0)?;
    let width = s.pick(a.width, "width", 0.5)?;
    positive(half, "half")?;
    positive(width, "width")?;
    require(t.is_finite() && t >= 0.0, || format!("t must be non-negative, got {t}"))?;
    require(steps > 0, || "steps must be at least 1".into())?;

    let h = parse(&src, &["q", "p"])?;
    let axis = Axis::centered(half, count)?;
    let grid = PhaseGrid::qp(vec![axis, axis])?;
    // amplitude of a Gaussian density with standard deviation `width`
    let init = move |x: &[f64]| {
        let r2 = (x[0] - q0).powi(2) + (x[1] - p0).powi(2);
        Complex64::new((-r2 / (4.0 * width * width)).exp(), 0.0)
    };
    let psi0 = WaveFunction::from_fn(grid.clone(), init);
    let mut warnings = Vec::new();
    let psi = match method {
        Method::Spectral => {
            let op = build_liouvillian(&h, &grid)?;
            warnings.extend(op.info().warnings.iter().cloned());
            evolve_spectral(&op, &psi0, t, dt)?
        }
        Method::Characteristics => evolve_characteristics(&h, &init, &grid, t, steps)?,
    };
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let drift = (psi.norm() - psi0.norm()).abs() / psi0.norm();
    let peak = psi.peak();
    let classical = HamiltonFlow::new(&h, 1).flow(&[q0, p0], t, steps.max(400));
    let dx = axis.dx();
    let cells = peak.iter().zip(&classical).map(|(a, b)| (a - b).abs() / dx).fold(0.0, f64::max);

    let mut table = Table::new(&["q1", "p1", "density"]);
    for (i, r) in psi.density().into_iter().enumerate() {
        let x = grid.coords(i);
        table.push(vec![Cell::Num(x[0]), Cell::Num(x[1]), Cell::Num(r)]);
    }
    let mut extra = Map::new();
    extra.insert(
        "evolution".into(),
        json!({"norm_drift": drift, "peak": peak, "classical": classical, "peak_offset_cells": cells, "warnings": warnings}),
    );
    let method_name = match method {
        Method::Spectral => "spectral",
        Method::Characteristics => "characteristics",
    };
    Ok(Outcome {
        table,
        parameters: params(json!({
            "hamiltonian": src, "method": method_name, "t": t, "dt": dt, "steps": steps, "grid": count,
            "half": half, "q0": q0, "p0": p0, "width": width
        })),
        extra,
        summary: format!(
            "evolve ({method_name}): t = {t}, peak at ({}, {}) vs classical ({}, {}), offset {:.3} cells, norm drift {}",
            num(peak[0]),
            num(peak[1]),
            num(classical[0]),
            num(classical[1]),
            cells,
            num(drift)
        ),
        failure: (cells > 1.0 + 1e-9).then(|| format!("density peak is {cells:.3} cells from the classical point")),
    })
}

pub fn bessel_zeros(a: BesselArgs, s: &Settings) -> Result<Outcome, CliError> {
    let nus = s.pick(a.nu, "nu", RealList(vec![1.0]))?;
    let ks: Span = s.pick(a.k, "k", Span { lo: 1, hi: 3 })?;
    let ks = ks.indices(1).map_err(CliError::Usage)?;
    for &nu in &nus.0 {
        require(nu >= 0.0, || format!("nu must be non-negative, got {nu}"))?;
    }
    let pairs: Vec<(f64, usize)> = nus.0.iter().flat_map(|&nu| ks.clone().map(move |k| (nu, k))).collect();
    let zeros = kvn_core::aharonov::bessel_zeros(&pairs).into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["nu", "k", "zero"]);
    for ((nu, k), z) in pairs.iter().zip(&zeros) {
        table.push(vec![Cell::Num(*nu), Cell::Int(*k as i64), Cell::Num(*z)]);
    }
    Ok(Outcome {
        parameters: params(json!({"nu": nus.0, "k": format!("{}..{}", ks.start(), ks.end())})),
        extra: Map::new(),
        summary: format!("bessel-zeros: {} zero(s) for nu = {nus}", zeros.len()),
        table,
        failure: None,
    })
}
