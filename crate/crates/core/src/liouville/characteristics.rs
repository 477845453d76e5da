use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::HamiltonFlow;
use crate::error::{KvnError, Result};
use crate::expr::Expr;
use crate::grid::{PhaseGrid, Representation, WaveFunction};

const STENCIL: usize = 8;

fn check(h: &Expr, grid: &PhaseGrid) -> Result<()> {
    grid.require(Representation::QP)?;
    if h.arity() > 2 * grid.n {
        return Err(KvnError::Dimension("Hamiltonian uses more variables than the grid has axes".into()));
    }
    Ok(())
}

/// ψ(φ, t) = ψ0(flow_{−t}(φ)) on every grid point, with ψ0 given in closed form.
pub fn evolve_characteristics(
    h: &Expr,
    initial: &(dyn Fn(&[f64]) -> Complex64 + Sync),
    grid: &PhaseGrid,
    t: f64,
    steps: usize,
) -> Result<WaveFunction> {
    check(h, grid)?;
    let flow = HamiltonFlow::new(h, grid.n);
    let data = (0..grid.len())
        .into_par_iter()
        .map(|i| initial(&flow.flow(&grid.coords(i), -t, steps)))
        .collect();
    WaveFunction::from_data(grid.clone(), data)
}

/// Same as [`evolve_characteristics`] with ψ0 given on the grid; foot points
/// are evaluated by local 8-point Lagrange interpolation with periodic wrap.
pub fn evolve_characteristics_grid(h: &Expr, psi: &WaveFunction, t: f64, steps: usize) -> Result<WaveFunction> {
    check(h, &psi.grid)?;
    let grid = &psi.grid;
    let flow = HamiltonFlow::new(h, grid.n);
    let data = (0..grid.len())
        .into_par_iter()
        .map(|i| interpolate(psi, &flow.flow(&grid.coords(i), -t, steps)))
        .collect();
    WaveFunction::from_data(grid.clone(), data)
}

fn lagrange_weights(frac: f64) -> [f64; STENCIL] {
    // nodes at -3..=4 relative to the cell start
    let mut w = [1.0; STENCIL];
    for (j, wj) in w.iter_mut().enumerate() {
        let xj = j as f64 - 3.0;
        for k in 0..STENCIL {
            if k != j {
                let xk = k as f64 - 3.0;
                *wj *= (frac - xk) / (xj - xk);
            }
        }
    }
    w
}

/// Tensor-product Lagrange interpolation of ψ at an arbitrary point.
pub fn interpolate(psi: &WaveFunction, x: &[f64]) -> Complex64 {
    let grid = &psi.grid;
    let d = grid.axes.len();
    let strides = grid.strides();
    let mut base = Vec::with_capacity(d);
    let mut weights = Vec::with_capacity(d);
    for (a, ax) in grid.axes.iter().enumerate() {
        let u = (x[a] - ax.min) / ax.dx();
        let cell = u.floor();
        base.push(cell as i64);
        weights.push(lagrange_weights(u - cell));
    }
    let total = STENCIL.pow(d as u32);
    let mut acc = Complex64::default();
    for m in 0..total {
        let mut rem = m;
        let mut idx = 0usize;
        let mut w = 1.0;
        for a in (0..d).rev() {
            let j = rem % STENCIL;
            rem /= STENCIL;
            let count = grid.axes[a].count as i64;
            let k = (base[a] + j as i64 - 3).rem_euclid(count) as usize;
            idx += k * strides[a];
            w *= weights[a][j];
        }
        if w != 0.0 {
            acc += psi.data[idx] * w;
        }
    }
    acc
}
