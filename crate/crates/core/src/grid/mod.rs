//! Uniform periodic phase-space grids and complex wavefunctions on them,
//! in the (q, p) or mixed (q, λ_p) representation.

mod fourier;
mod io;

pub use fourier::{gauge_phase_mixed, gauge_shift_qp, inverse_partial_fourier, partial_fourier};
pub use io::{read_snapshot, write_density_csv, write_snapshot};

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{KvnError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Representation {
    QP,
    QLambdaP,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::QP => write!(f, "QP"),
            Representation::QLambdaP => write!(f, "QLambdaP"),
        }
    }
}

/// Periodic axis: points x_j = min + j·dx, dx = (max − min)/count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(KvnError::InvalidParameter(format!("axis needs max > min, got [{min}, {max}]")));
        }
        if count < 2 || !count.is_power_of_two() {
            return Err(KvnError::InvalidParameter(format!("axis count must be a power of two >= 2, got {count}")));
        }
        Ok(Axis { min, max, count })
    }

    /// Axis centred on zero with the given half-width.
    pub fn centered(half_width: f64, count: usize) -> Result<Self> {
        Axis::new(-half_width, half_width, count)
    }

    pub fn length(&self) -> f64 {
        self.max - self.min
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.count as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.min + j as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.point(j)).collect()
    }

    /// Signed frequency index of FFT bin k, in [−N/2, N/2).
    pub fn signed_index(&self, k: usize) -> i64 {
        let n = self.count as i64;
        let k = k as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    /// Angular wavenumbers in FFT order, with the Nyquist bin set to zero
    /// (used for odd derivatives).
    pub fn derivative_wavenumbers(&self) -> Vec<f64> {
        let dk = 2.0 * std::f64::consts::PI / self.length();
        (0..self.count)
            .map(|k| if k == self.count / 2 { 0.0 } else { self.signed_index(k) as f64 * dk })
            .collect()
    }

    /// Largest wavenumber resolved on the axis.
    pub fn k_max(&self) -> f64 {
        std::f64::consts::PI / self.dx()
    }

    pub fn max_abs(&self) -> f64 {
        self.min.abs().max(self.max.abs())
    }
}

/// Tensor grid over 2n phase-space axes: q_1..q_n then p_1..p_n (or λ_p).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseGrid {
    pub n: usize,
    pub axes: Vec<Axis>,
    pub repr: Representation,
    /// For a mixed grid obtained by transforming a (q, p) grid, the
    /// original momentum axes (needed to undo the transform exactly).
    pub dual: Option<Vec<Axis>>,
}

impl PhaseGrid {
    pub fn new(axes: Vec<Axis>, repr: Representation) -> Result<Self> {
        if axes.is_empty() || !axes.len().is_multiple_of(2) || axes.len() > 6 {
            return Err(KvnError::Dimension(format!("need 2, 4 or 6 axes, got {}", axes.len())));
        }
        Ok(PhaseGrid { n: axes.len() / 2, axes, repr, dual: None })
    }

    pub fn qp(axes: Vec<Axis>) -> Result<Self> {
        PhaseGrid::new(axes, Representation::QP)
    }

    pub fn mixed(axes: Vec<Axis>) -> Result<Self> {
        PhaseGrid::new(axes, Representation::QLambdaP)
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.count).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.dx()).product()
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.axes.len()];
        for k in (0..self.axes.len() - 1).rev() {
            s[k] = s[k + 1] * self.axes[k + 1].count;
        }
        s
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.axes.len()];
        for k in (0..self.axes.len()).rev() {
            out[k] = idx % self.axes[k].count;
            idx /= self.axes[k].count;
        }
        out
    }

    pub fn coords(&self, idx: usize) -> Vec<f64> {
        self.multi_index(idx).iter().zip(&self.axes).map(|(i, a)| a.point(*i)).collect()
    }

    pub fn coords_into(&self, mut idx: usize, out: &mut [f64]) {
        for k in (0..self.axes.len()).rev() {
            let a = &self.axes[k];
            out[k] = a.point(idx % a.count);
            idx /= a.count;
        }
    }

    pub fn require(&self, repr: Representation) -> Result<()> {
        if self.repr != repr {
            return Err(KvnError::Representation { expected: repr.to_string(), found: self.repr.to_string() });
        }
        Ok(())
    }

    /// Tabulate a real function of the grid coordinates.
    pub fn sample(&self, f: impl Fn(&[f64]) -> f64 + Sync) -> Vec<f64> {
        let d = self.axes.len();
        (0..self.len())
            .into_par_iter()
            .map_init(|| vec![0.0; d], |buf, i| {
                self.coords_into(i, buf);
                f(buf)
            })
            .collect()
    }
}

/// Complex amplitudes on a phase grid, row-major with the last axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    pub grid: PhaseGrid,
    pub data: Vec<Complex64>,
}

impl WaveFunction {
    pub fn zeros(grid: PhaseGrid) -> Self {
        let n = grid.len();
        WaveFunction { grid, data: vec![Complex64::default(); n] }
    }

    pub fn from_fn(grid: PhaseGrid, f: impl Fn(&[f64]) -> Complex64 + Sync) -> Self {
        let d = grid.axes.len();
        let data = (0..grid.len())
            .into_par_iter()
            .map_init(|| vec![0.0; d], |buf, i| {
                grid.coords_into(i, buf);
                f(buf)
            })
            .collect();
        WaveFunction { grid, data }
    }

    pub fn from_data(grid: PhaseGrid, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(KvnError::Dimension(format!("{} amplitudes for {} grid points", data.len(), grid.len())));
        }
        Ok(WaveFunction { grid, data })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn inner(&self, o: &WaveFunction) -> Complex64 {
        self.data.iter().zip(&o.data).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.grid.cell_volume()
    }

    pub fn normalized(&self) -> WaveFunction {
        self.scale(Complex64::new(1.0 / self.norm(), 0.0))
    }

    pub fn scale(&self, s: Complex64) -> WaveFunction {
        WaveFunction { grid: self.grid.clone(), data: self.data.iter().map(|z| z * s).collect() }
    }

    /// self + s·o
    pub fn axpy(&self, s: Complex64, o: &WaveFunction) -> WaveFunction {
        WaveFunction {
            grid: self.grid.clone(),
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + s * b).collect(),
        }
    }

    /// ‖self − o‖ in the grid L2 norm.
    pub fn distance(&self, o: &WaveFunction) -> f64 {
        let s: f64 = self.data.iter().zip(&o.data).map(|(a, b)| (a - b).norm_sqr()).sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    pub fn relative_distance(&self, o: &WaveFunction) -> f64 {
        self.distance(o) / self.norm()
    }

    pub fn multiply_pointwise(&self, f: &[Complex64]) -> WaveFunction {
        WaveFunction { grid: self.grid.clone(), data: self.data.iter().zip(f).map(|(a, b)| a * b).collect() }
    }

    /// ρ = |ψ|² pointwise.
    pub fn density(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Grid coordinates of the largest |ψ|².
    pub fn peak(&self) -> Vec<f64> {
        let (i, _) = self
            .data
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, z)| if z.norm_sqr() > acc.1 { (i, z.norm_sqr()) } else { acc });
        self.grid.coords(i)
    }
}

/// Cached FFT plans and derivative wavenumbers for every axis of a grid.
#[derive(Clone)]
pub struct Spectral {
    shape: Vec<usize>,
    fwd: Vec<Arc<dyn Fft<f64>>>,
    inv: Vec<Arc<dyn Fft<f64>>>,
    k: Vec<Vec<f64>>,
}

impl fmt::Debug for Spectral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Spectral({:?})", self.shape)
    }
}

impl Spectral {
    pub fn new(grid: &PhaseGrid) -> Self {
        let mut planner = FftPlanner::new();
        Spectral {
            shape: grid.shape(),
            fwd: grid.axes.iter().map(|a| planner.plan_fft_forward(a.count)).collect(),
            inv: grid.axes.iter().map(|a| planner.plan_fft_inverse(a.count)).collect(),
            k: grid.axes.iter().map(|a| a.derivative_wavenumbers()).collect(),
        }
    }

    pub fn forward(&self, axis: usize) -> &Arc<dyn Fft<f64>> {
        &self.fwd[axis]
    }

    pub fn inverse(&self, axis: usize) -> &Arc<dyn Fft<f64>> {
        &self.inv[axis]
    }

    /// ∂/∂x_axis of `data` by spectral differentiation.
    pub fn derivative(&self, data: &[Complex64], axis: usize) -> Vec<Complex64> {
        let mut out = data.to_vec();
        let n = self.shape[axis] as f64;
        let fwd = &self.fwd[axis];
        let inv = &self.inv[axis];
        let k = &self.k[axis];
        for_each_line(&mut out, &self.shape, axis, |line| {
            let mut scratch = vec![Complex64::default(); fwd.get_inplace_scratch_len()];
            fwd.process_with_scratch(line, &mut scratch);
            for (z, kk) in line.iter_mut().zip(k) {
                *z *= Complex64::new(0.0, kk / n);
            }
            inv.process_with_scratch(line, &mut scratch);
        });
        out
    }
}

/// Apply `f` to every 1-D line of `data` along `axis`.
pub fn for_each_line(
    data: &mut [Complex64],
    shape: &[usize],
    axis: usize,
    f: impl Fn(&mut [Complex64]) + Sync,
) {
    let len = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    if inner == 1 {
        data.par_chunks_mut(len).for_each(&f);
        return;
    }
    let block = len * inner;
    data.par_chunks_mut(block).for_each(|chunk| {
        let mut line = vec![Complex64::default(); len];
        for off in 0..inner {
            for j in 0..len {
                line[j] = chunk[j * inner + off];
            }
            f(&mut line);
            for j in 0..len {
                chunk[j * inner + off] = line[j];
            }
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_validation() {
        assert!(Axis::new(0.0, 1.0, 12).is_err());
        assert!(Axis::new(1.0, 1.0, 16).is_err());
        assert!(Axis::new(-1.0, 1.0, 16).is_ok());
    }

    #[test]
    fn spectral_derivative_of_plane_wave() {
        let g = PhaseGrid::qp(vec![Axis::new(0.0, 2.0 * std::f64::consts::PI, 32).unwrap(), Axis::centered(3.0, 16).unwrap()])
            .unwrap();
        let psi = WaveFunction::from_fn(g.clone(), |x| Complex64::new(0.0, 3.0 * x[0]).exp() * (-x[1] * x[1]).exp());
        let sp = Spectral::new(&g);
        let d = sp.derivative(&psi.data, 0);
        for (a, b) in d.iter().zip(&psi.data) {
            assert!((a - b * Complex64::new(0.0, 3.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn multi_index_round_trip() {
        let g = PhaseGrid::qp(vec![Axis::centered(1.0, 4).unwrap(), Axis::centered(1.0, 8).unwrap()]).unwrap();
        let st = g.strides();
        for i in 0..g.len() {
            let m = g.multi_index(i);
            assert_eq!(m[0] * st[0] + m[1] * st[1], i);
        }
    }
}
