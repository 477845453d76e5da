use std::f64::consts::PI;

use kvn_core::expr::Expr;
use kvn_core::gauge::{ChargedParticle, GaugeField};
use kvn_core::grid::{Axis, PhaseGrid, WaveFunction};
use kvn_core::liouville::{build_mixed_operator, GridOperator};
use kvn_core::spectra::{
    hermite_functions, kvn_oscillator, landau_change_of_variables, landau_change_of_variables_inverse,
    landau_reduction_residual, landau_spectrum_kvn, landau_spectrum_quantum, oscillator_polar_check,
    oscillator_spectrum, LandauKvnState, LandauParams,
};
use kvn_core::testing::{random_gaussian_packet, random_point};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Hermite polynomials H_0..H_3 written out, normalised as functions of u.
fn hermite_oracle(n: usize, u: &Expr) -> Expr {
    let poly = match n {
        0 => Expr::one(),
        1 => u.clone() * 2.0,
        2 => u.sq() * 4.0 - 2.0,
        3 => u.powi(3) * 8.0 - u.clone() * 12.0,
        _ => unreachable!(),
    };
    let norm = 1.0 / (PI.sqrt() * 2f64.powi(n as i32) * (1..=n).product::<usize>() as f64).sqrt();
    poly * (-(u.sq()) * 0.5).exp() * norm
}

fn oscillator_eigen_oracle(n: usize, m_idx: usize, delta: f64, sigma: f64) -> Expr {
    let (q, l) = (Expr::var(0), Expr::var(1));
    let zp = (q.clone() + l.clone() * delta) / 2f64.sqrt() / sigma;
    let zm = (q - l * delta) / 2f64.sqrt() / sigma;
    hermite_oracle(n, &zp) * hermite_oracle(m_idx, &zm) / sigma
}

#[test]
fn hermite_recurrence_matches_explicit_polynomials() {
    for u in [-2.3, -0.4, 0.0, 0.9, 3.1] {
        let h = hermite_functions(3, u);
        for n in 0..=3 {
            let want = hermite_oracle(n, &Expr::constant(u)).eval(&[]);
            assert!((h[n] - want).abs() < 1e-14, "n = {n}, u = {u}");
        }
    }
}

#[test]
fn oscillator_eigenfunctions_solve_the_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (big_n, n, delta, m, w) in [(0, 0, 1.0, 1.0, 1.0), (1, 0, 0.5, 2.0, 0.7), (2, 1, 2.0, 0.8, 1.3), (-2, 3, 1.0, 1.0, 2.0)] {
        let pair = kvn_oscillator(big_n, n, delta, m, w).unwrap();
        assert_eq!(pair.eigenvalue, big_n as f64 * w);
        let psi = oscillator_eigen_oracle(n as usize, pair.m_index(), delta, pair.sigma());
        let (q, l) = (Expr::var(0), Expr::var(1));
        let h_psi = psi.diff(0).diff(1) / m - q * l * psi.clone() * (m * w * w);
        for _ in 0..20 {
            let s = pair.sigma();
            let x = random_point(&mut rng, &[(-3.0 * s, 3.0 * s), (-3.0 * s / delta, 3.0 * s / delta)]);
            let v = psi.eval(&x);
            assert!((pair.value(x[0], x[1]) - v).abs() < 1e-12, "value at {x:?}");
            assert!((h_psi.eval(&x) - pair.eigenvalue * v).abs() < 1e-10);
        }
        let r = pair.grid_residual(&pair.natural_grid(128).unwrap()).unwrap();
        assert!(r < 1e-8, "N = {big_n}: grid residual {r}");
    }
}

#[test]
fn oscillator_spectrum_is_n_omega() {
    let s = oscillator_spectrum(-2..=3, 1.5);
    assert_eq!(s.len(), 6);
    for (k, e) in s {
        assert_eq!(e, k as f64 * 1.5);
    }
}

#[test]
fn eigenvalue_does_not_depend_on_delta() {
    for delta in [0.25, 1.0, 3.0] {
        let pair = kvn_oscillator(1, 1, delta, 1.0, 0.8).unwrap();
        assert_eq!(pair.eigenvalue, 0.8);
        let grid = pair.natural_grid(128).unwrap();
        let psi = pair.wavefunction(&grid).unwrap();
        let h = pair.operator(&grid).unwrap().apply(&psi).unwrap();
        let rq = psi.inner(&h).re / psi.norm_sqr();
        assert!((rq - 0.8).abs() < 1e-8, "Δ = {delta}: {rq}");
    }
}

#[test]
fn invalid_oscillator_labels() {
    assert!(kvn_oscillator(-1, 0, 1.0, 1.0, 1.0).is_err());
    assert!(kvn_oscillator(0, 0, 0.0, 1.0, 1.0).is_err());
    assert!(kvn_oscillator(0, 0, 1.0, -1.0, 1.0).is_err());
    let pair = kvn_oscillator(0, 0, 1.0, 1.0, 1.0).unwrap();
    let qp = PhaseGrid::qp(vec![Axis::centered(5.0, 16).unwrap(), Axis::centered(5.0, 16).unwrap()]).unwrap();
    assert!(pair.wavefunction(&qp).is_err());
}

#[test]
fn polar_form_needs_integer_n() {
    for big_n in [1.0, -1.0, 2.0] {
        let r = oscillator_polar_check(big_n, 1.3, 0.9, 256).unwrap();
        assert!(r.single_valued);
        assert!(r.residual < 1e-8, "N = {big_n}: {}", r.residual);
        assert!((r.eigenvalue - big_n * 0.9).abs() < 1e-15);
    }
    let zero = oscillator_polar_check(0.0, 1.0, 1.0, 128).unwrap();
    assert!(zero.single_valued && zero.residual < 1e-8);
    let half = oscillator_polar_check(0.5, 1.0, 1.0, 256).unwrap();
    assert!(!half.single_valued);
    assert!((half.winding_defect - 2.0).abs() < 1e-12);
    // the cut along θ = 0 is seen by the grid operator
    assert!(half.residual > 1e-3, "{}", half.residual);
}

#[test]
fn quantum_landau_levels() {
    let p = LandauParams { mass: 0.7, charge: 2.0, c_light: 3.0, b: 1.5, hbar: 0.5 };
    let e = landau_spectrum_quantum(5, 0.0, &p).unwrap();
    let unit = p.charge * p.hbar * p.b / (p.mass * p.c_light);
    assert!((e[0] - unit / 2.0).abs() < 1e-15);
    for w in e.windows(2) {
        assert!((w[1] - w[0] - unit).abs() < 1e-14);
    }
    let with_pz = landau_spectrum_quantum(2, 1.2, &p).unwrap();
    assert!((with_pz[1] - e[1] - 1.44 / 1.4).abs() < 1e-14);
    for b in [1e-3, 1e-6, 0.0] {
        let weak = landau_spectrum_quantum(3, 1.2, &LandauParams { b, ..p }).unwrap();
        assert!(weak.iter().all(|v| (v - 1.44 / 1.4).abs() <= 4.0 * b * unit / p.b + 1e-15));
    }
}

#[test]
fn kvn_landau_eigenvalues() {
    let p = LandauParams { mass: 1.2, charge: 1.0, c_light: 1.0, b: 0.9, hbar: 1.0 };
    let w = p.omega();
    let zero = LandauKvnState::new(0, 0, 0.3, -0.5, 0.0, 1.7, 1.0).unwrap();
    assert_eq!(zero.eigenvalue(&p), 0.0);
    let a = LandauKvnState::new(2, 0, 0.0, 0.0, 0.8, 1.5, 1.0).unwrap();
    let b = LandauKvnState { lambda_z0: 1.6, p_z0: 0.75, ..a };
    assert!((a.eigenvalue(&p) - b.eigenvalue(&p)).abs() < 1e-15);
    assert!((a.eigenvalue(&p) - (2.0 * w + 0.8 * 1.5 / 1.2)).abs() < 1e-15);
    for st in [a, b, LandauKvnState::new(-1, 2, 0.4, -0.6, 0.0, 0.0, 0.7).unwrap()] {
        let (rq, res) = st.reduced_check(&p, 128).unwrap();
        assert!((rq - st.eigenvalue(&p)).abs() < 1e-6, "{rq}");
        assert!(res < 1e-6, "{res}");
    }
    assert!(LandauKvnState::new(-2, 1, 0.0, 0.0, 0.0, 0.0, 1.0).is_err());
    assert!(landau_spectrum_kvn(0..=0, 0.0, 0.0, &LandauParams { b: -1.0, ..p }, 1.0, 64).is_err());
}

#[test]
fn kvn_landau_degeneracy_certificate() {
    let p = LandauParams { mass: 1.0, charge: 1.0, c_light: 1.0, b: 1.3, hbar: 1.0 };
    let levels = landau_spectrum_kvn(-1..=2, 0.4, 0.9, &p, 1.0, 128).unwrap();
    assert_eq!(levels.len(), 4);
    for lvl in &levels {
        let want = lvl.big_n as f64 * p.omega() + 0.4 * 0.9 / p.mass;
        assert!((lvl.eigenvalue - want).abs() < 1e-14);
        let cert = &lvl.certificate;
        assert!(cert.independent_labels(1e-6) >= 4, "N = {}: {:?}", lvl.big_n, cert.members);
        assert!(cert.max_residual < 1e-6 && cert.max_spread < 1e-6);
        assert!(cert.labels.len() > cert.quantum_labels.len());
    }
}

#[test]
fn landau_eigenfunction_on_full_mixed_grid() {
    // (x, y, z, λ_x, λ_y, λ_z); the plane-wave labels are chosen periodic on
    // the short transverse axes so four points resolve them exactly
    let p = LandauParams { mass: 1.0, charge: 1.0, c_light: 1.0, b: 1.5, hbar: 1.0 };
    let st = LandauKvnState::new(1, 0, 1.0, -1.0, 1.0, 1.0, 1.0).unwrap();
    let reduced = st.reduced_grid(&p, 64).unwrap();
    let wrap = || Axis::new(0.0, 2.0 * PI, 4).unwrap();
    let grid = PhaseGrid::mixed(vec![
        reduced.axes[0],
        wrap(),
        wrap(),
        reduced.axes[1],
        wrap(),
        wrap(),
    ])
    .unwrap();
    let field = GaugeField::uniform_b(p.b, p.charge, p.c_light).unwrap();
    let op = build_mixed_operator(&ChargedParticle::free(3, p.mass), Some(&field), &grid, 0.0).unwrap();
    let psi = WaveFunction::from_fn(grid.clone(), |x| st.value(x, &p));
    let out = op.apply(&psi).unwrap();
    let r = out.distance(&psi.scale(Complex64::new(st.eigenvalue(&p), 0.0))) / psi.norm();
    assert!(r < 1e-6, "{r}");
}

#[test]
fn reduction_to_the_oscillator() {
    let p = LandauParams { mass: 0.9, charge: 1.5, c_light: 2.0, b: 1.1, hbar: 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10 {
        let g = random_gaussian_packet(&mut rng, 2, 3, 4);
        let pts: Vec<[f64; 2]> = (0..20)
            .map(|_| {
                let x = random_point(&mut rng, &[(-2.0, 2.0), (-2.0, 2.0)]);
                [x[0], x[1]]
            })
            .collect();
        let r = landau_reduction_residual(&g, &pts, 0.7, -0.3, &p).unwrap();
        assert!(r < 1e-8, "{r}");
    }
}

proptest! {
    #[test]
    fn change_of_variables_round_trips(
        x in -5.0f64..5.0, l in -5.0f64..5.0, py in -3.0f64..3.0, ly in -3.0f64..3.0, b in 0.1f64..4.0,
    ) {
        let p = LandauParams { b, ..Default::default() };
        let (a, c) = landau_change_of_variables(x, l, py, ly, &p);
        let (x2, l2) = landau_change_of_variables_inverse(a, c, py, ly, &p);
        prop_assert!((x2 - x).abs() <= 1e-12 * (1.0 + x.abs() + py.abs() / b));
        prop_assert!((l2 - l).abs() <= 1e-12 * (1.0 + l.abs() + ly.abs() / b));
    }

    #[test]
    fn kvn_eigenvalue_depends_on_labels_only_through_n_and_product(
        big_n in -3i64..4, ly in -2.0f64..2.0, py in -2.0f64..2.0, lz in -2.0f64..2.0, pz in 0.1f64..2.0, s in 0.2f64..5.0,
    ) {
        let p = LandauParams::default();
        let n = (-big_n).max(0) as u32;
        let a = LandauKvnState::new(big_n, n, 0.0, 0.0, lz, pz, 1.0).unwrap();
        let b = LandauKvnState::new(big_n, n + 2, ly, py, lz * s, pz / s, 0.5).unwrap();
        prop_assert!((a.eigenvalue(&p) - b.eigenvalue(&p)).abs() <= 1e-12);
    }
}
