use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{KvnError, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real x (Lanczos, g = 7), with reflection below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// J_ν(x) = Σ_k (−1)^k (x/2)^{2k+ν} / (k! Γ(k+ν+1)).
pub fn bessel_j_series(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let h = x / 2.0;
    let mut term = h.powf(nu) / gamma(nu + 1.0);
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -h * h / (k * (k + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && k > h {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    sum
}

/// Miller backward recurrence from a high order, normalised with
/// (x/2)^μ = Σ_k (μ+2k) Γ(μ+k)/k! J_{μ+2k}(x), μ = ν − ⌊ν⌋.
fn bessel_j_miller(nu: f64, x: f64) -> f64 {
    let ni = nu.floor() as usize;
    let mu = nu - ni as f64;
    let big = nu.max(x);
    let top = (big + 30.0 + 12.0 * big.sqrt()).ceil() as usize + ni;
    let top = top + top % 2;
    // j[k] ∝ J_{μ+k}
    let mut next = 0.0;
    let mut cur = 1e-300;
    let mut vals = vec![0.0; top + 1];
    vals[top] = cur;
    for k in (1..=top).rev() {
        let order = mu + k as f64;
        let prev = 2.0 * order / x * cur - next;
        next = cur;
        cur = prev;
        vals[k - 1] = cur;
        if cur.abs() > 1e250 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
            next *= 1e-250;
            cur *= 1e-250;
        }
    }
    let mut norm = 0.0;
    let mut g = if mu == 0.0 { 0.0 } else { gamma(mu) };
    for k in 0..=top / 2 {
        let c = if k == 0 {
            if mu == 0.0 { 1.0 } else { mu * g }
        } else {
            g *= if mu == 0.0 && k == 1 { 1.0 } else { (mu + k as f64 - 1.0) / k as f64 };
            if mu == 0.0 {
                2.0
            } else {
                (mu + 2.0 * k as f64) * g
            }
        };
        norm += c * vals[2 * k];
    }
    vals[ni] * (x / 2.0).powf(mu) / norm
}

/// Bessel function of the first kind of real order ν ≥ 0 at x ≥ 0.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(KvnError::InvalidParameter(format!("order must be finite and non-negative, got {nu}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(KvnError::InvalidParameter(format!("argument must be finite and non-negative, got {x}")));
    }
    Ok(if x <= 12.0 { bessel_j_series(nu, x) } else { bessel_j_miller(nu, x) })
}

const SCAN_STEP: f64 = PI / 8.0;
const SCAN_LIMIT: f64 = 400.0;

/// Safeguarded Newton on a bracket [a, b] with a sign change. J' comes from
/// (J_{ν−1} − J_{ν+1})/2 for ν ≥ 1 and from a secant otherwise.
fn refine(nu: f64, mut a: f64, mut b: f64) -> Result<f64> {
    let mut fa = bessel_j(nu, a)?;
    let mut prev = a;
    let mut fprev = fa;
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let fx = bessel_j(nu, x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx < 0.0) == (fa < 0.0) {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        let slope = if nu >= 1.0 {
            0.5 * (bessel_j(nu - 1.0, x)? - bessel_j(nu + 1.0, x)?)
        } else {
            (fx - fprev) / (x - prev)
        };
        prev = x;
        fprev = fx;
        let mut next = x - fx / slope;
        if !next.is_finite() || next <= a || next >= b {
            next = 0.5 * (a + b);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x || b - a <= 4.0 * f64::EPSILON * b {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// k-th zero of J_ν on [0, ∞) in increasing order. For ν > 0 the zero at the
/// origin is k = 1; for ν = 0 the first zero is 2.4048….
pub fn bessel_zero(nu: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(KvnError::ZeroSearch("zeros are numbered from 1".into()));
    }
    bessel_j(nu, 0.0)?;
    let mut remaining = k;
    if nu > 0.0 {
        if k == 1 {
            return Ok(0.0);
        }
        remaining -= 1;
    }
    let mut a = nu + 1.0;
    let mut fa = bessel_j(nu, a)?;
    while a < SCAN_LIMIT {
        let b = a + SCAN_STEP;
        let fb = bessel_j(nu, b)?;
        if fb == 0.0 || (fa < 0.0) != (fb < 0.0) {
            remaining -= 1;
            if remaining == 0 {
                return if fb == 0.0 { Ok(b) } else { refine(nu, a, b) };
            }
        }
        a = b;
        fa = fb;
    }
    Err(KvnError::ZeroSearch(format!(
        "zero {k} of J_{nu} lies beyond the scan range [{}, {SCAN_LIMIT}]",
        nu + 1.0
    )))
}

/// Zeros for every (ν, k) pair, computed in parallel.
pub fn bessel_zeros(pairs: &[(f64, usize)]) -> Vec<Result<f64>> {
    pairs.par_iter().map(|&(nu, k)| bessel_zero(nu, k)).collect()
}
