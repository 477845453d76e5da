use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{for_each_line, Axis, PhaseGrid, Representation, WaveFunction};
use crate::error::{KvnError, Result};
use crate::gauge::GaugeParam;

/// λ axis conjugate to a momentum axis: λ_k = (k − N/2)Δλ, Δλ = 2π/(NΔp).
fn dual_axis(p: &Axis) -> Axis {
    let n = p.count as f64;
    let dl = 2.0 * PI / (n * p.dx());
    Axis { min: -n / 2.0 * dl, max: n / 2.0 * dl, count: p.count }
}

/// Momentum axis conjugate to a λ axis when no original is recorded.
fn centered_momentum(l: &Axis) -> Axis {
    let n = l.count as f64;
    let dp = 2.0 * PI / (n * l.dx());
    Axis { min: -n / 2.0 * dp, max: n / 2.0 * dp, count: l.count }
}

/// ψ̃(q, λ) = (1/√2π) ∫ ψ(q, p) e^{−iλp} dp along every momentum axis,
/// discretised so that the map is exactly unitary.
pub fn partial_fourier(psi: &WaveFunction) -> Result<WaveFunction> {
    psi.grid.require(Representation::QP)?;
    let n = psi.grid.n;
    let shape = psi.grid.shape();
    let mut data = psi.data.clone();
    let mut axes = psi.grid.axes.clone();
    let mut planner = FftPlanner::new();
    for i in 0..n {
        let ax = n + i;
        let p = psi.grid.axes[ax];
        let lam = dual_axis(&p);
        let fft = planner.plan_fft_forward(p.count);
        let pref = p.dx() / (2.0 * PI).sqrt();
        let phase: Vec<Complex64> = (0..p.count)
            .map(|k| Complex64::from_polar(pref, -lam.point(k) * p.min))
            .collect();
        for_each_line(&mut data, &shape, ax, |line| {
            for (j, z) in line.iter_mut().enumerate() {
                if j % 2 == 1 {
                    *z = -*z;
                }
            }
            fft.process(line);
            for (z, ph) in line.iter_mut().zip(&phase) {
                *z *= ph;
            }
        });
        axes[ax] = lam;
    }
    let mut grid = PhaseGrid::new(axes, Representation::QLambdaP)?;
    grid.dual = Some(psi.grid.axes[n..].to_vec());
    WaveFunction::from_data(grid, data)
}

/// Inverse of [`partial_fourier`]. Uses the recorded momentum axes when
/// present, otherwise momentum axes centred on zero.
pub fn inverse_partial_fourier(psi: &WaveFunction) -> Result<WaveFunction> {
    psi.grid.require(Representation::QLambdaP)?;
    let n = psi.grid.n;
    let shape = psi.grid.shape();
    let mut data = psi.data.clone();
    let mut axes = psi.grid.axes.clone();
    let mut planner = FftPlanner::new();
    for i in 0..n {
        let ax = n + i;
        let lam = psi.grid.axes[ax];
        let p = match &psi.grid.dual {
            Some(d) => d[i],
            None => centered_momentum(&lam),
        };
        if p.count != lam.count {
            return Err(KvnError::Dimension("recorded momentum axis does not match".into()));
        }
        let ifft = planner.plan_fft_inverse(lam.count);
        let pref = lam.dx() / (2.0 * PI).sqrt();
        let phase: Vec<Complex64> = (0..lam.count)
            .map(|k| Complex64::from_polar(1.0, lam.point(k) * p.min))
            .collect();
        for_each_line(&mut data, &shape, ax, |line| {
            for (z, ph) in line.iter_mut().zip(&phase) {
                *z *= ph;
            }
            ifft.process(line);
            for (j, z) in line.iter_mut().enumerate() {
                *z *= if j % 2 == 1 { -pref } else { pref };
            }
        });
        axes[ax] = p;
    }
    WaveFunction::from_data(PhaseGrid::new(axes, Representation::QP)?, data)
}

/// ψ' = exp(i(e/c)α̃) ψ with α̃(q, λ_p) = −Σ_j λ_{p_j} ∂_jα(q, t).
pub fn gauge_phase_mixed(psi: &WaveFunction, alpha: &GaugeParam, coupling: f64, t: f64) -> Result<WaveFunction> {
    psi.grid.require(Representation::QLambdaP)?;
    let n = psi.grid.n;
    if alpha.n != n {
        return Err(KvnError::Dimension("gauge parameter and grid dimensions differ".into()));
    }
    let phase = WaveFunction::from_fn(psi.grid.clone(), |x| {
        let at = alpha.alpha_tilde(&x[..n], &x[n..], t);
        Complex64::from_polar(1.0, coupling * at)
    });
    Ok(psi.multiply_pointwise(&phase.data))
}

/// ψ'(q, p) = ψ(q, p − (e/c)∇α(q)) by a band-limited Fourier shift of each
/// momentum line.
pub fn gauge_shift_qp(psi: &WaveFunction, alpha: &GaugeParam, coupling: f64, t: f64) -> Result<WaveFunction> {
    psi.grid.require(Representation::QP)?;
    let n = psi.grid.n;
    if alpha.n != n {
        return Err(KvnError::Dimension("gauge parameter and grid dimensions differ".into()));
    }
    let grid = &psi.grid;
    let q_count: usize = grid.axes[..n].iter().map(|a| a.count).product();
    let p_len: usize = grid.axes[n..].iter().map(|a| a.count).product();
    let p_shape: Vec<usize> = grid.axes[n..].iter().map(|a| a.count).collect();
    let mut planner = FftPlanner::new();
    let plans: Vec<_> = (0..n)
        .map(|i| (planner.plan_fft_forward(p_shape[i]), planner.plan_fft_inverse(p_shape[i])))
        .collect();
    let q_axes = &grid.axes[..n];
    let mut out = psi.data.clone();
    for qi in 0..q_count {
        let mut rem = qi;
        let mut q = vec![0.0; n];
        for k in (0..n).rev() {
            q[k] = q_axes[k].point(rem % q_axes[k].count);
            rem /= q_axes[k].count;
        }
        let shift: Vec<f64> = alpha.grad(&q, t).iter().map(|g| coupling * g).collect();
        for i in 0..n {
            let half = grid.axes[n + i].length() / 2.0;
            if shift[i].abs() > half {
                return Err(KvnError::Aliasing { shift: shift[i], half_range: half });
            }
        }
        let start = qi * p_len;
        let block = &mut out[start..start + p_len];
        for i in 0..n {
            let ax = grid.axes[n + i];
            let len = ax.count;
            let dk = 2.0 * PI / ax.length();
            let phase: Vec<Complex64> = (0..len)
                .map(|k| Complex64::from_polar(1.0 / len as f64, -(ax.signed_index(k) as f64) * dk * shift[i]))
                .collect();
            let (f, b) = &plans[i];
            for_each_line(block, &p_shape, i, |line| {
                f.process(line);
                for (z, ph) in line.iter_mut().zip(&phase) {
                    *z *= ph;
                }
                b.process(line);
            });
        }
    }
    WaveFunction::from_data(grid.clone(), out)
}
