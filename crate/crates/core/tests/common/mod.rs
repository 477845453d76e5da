//! Independent oracles shared by the integration tests.

use std::f64::consts::PI;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Schläfli integral: J_ν(x) = (1/π)∫_0^π cos(νt − x sin t) dt − (sin νπ/π)∫_0^∞ e^{−x sinh t − νt} dt.
pub fn bessel_oracle(nu: f64, x: f64) -> f64 {
    let first = simpson(|t| (nu * t - x * t.sin()).cos(), 0.0, PI, 100_000) / PI;
    let s = (nu * PI).sin();
    if s.abs() < 1e-15 {
        return first;
    }
    // x sinh t exceeds 700 well before t = 12 for x ≥ 0.05
    let second = simpson(|t| (-x * t.sinh() - nu * t).exp(), 0.0, 12.0, 400_000);
    first - s / PI * second
}

pub fn oracle_zero(nu: f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = bessel_oracle(nu, a);
    for _ in 0..50 {
        let m = 0.5 * (a + b);
        let fm = bessel_oracle(nu, m);
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
