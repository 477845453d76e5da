use std::io::{Read, Write};

use num_complex::Complex64;

use super::{Axis, PhaseGrid, Representation, WaveFunction};
use crate::error::{KvnError, Result};

const MAGIC: &[u8; 4] = b"KVNW";
const VERSION: u32 = 1;

/// Binary snapshot: magic "KVNW", u32 version, u8 representation tag
/// (0 = QP, 1 = QLambdaP), u32 axis count, then (f64 min, f64 max, u64 count)
/// per axis, then row-major complex64 (f32 re, f32 im) amplitudes. All
/// numbers little-endian.
pub fn write_snapshot<W: Write>(psi: &WaveFunction, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    let tag: u8 = match psi.grid.repr {
        Representation::QP => 0,
        Representation::QLambdaP => 1,
    };
    w.write_all(&[tag])?;
    w.write_all(&(psi.grid.axes.len() as u32).to_le_bytes())?;
    for a in &psi.grid.axes {
        w.write_all(&a.min.to_le_bytes())?;
        w.write_all(&a.max.to_le_bytes())?;
        w.write_all(&(a.count as u64).to_le_bytes())?;
    }
    let mut buf = Vec::with_capacity(psi.data.len() * 8);
    for z in &psi.data {
        buf.extend_from_slice(&(z.re as f32).to_le_bytes());
        buf.extend_from_slice(&(z.im as f32).to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<WaveFunction> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(KvnError::Io("not a wavefunction snapshot".into()));
    }
    let mut u32b = [0u8; 4];
    r.read_exact(&mut u32b)?;
    let version = u32::from_le_bytes(u32b);
    if version != VERSION {
        return Err(KvnError::Io(format!("unsupported snapshot version {version}")));
    }
    let mut tag = [0u8; 1];
    r.read_exact(&mut tag)?;
    let repr = match tag[0] {
        0 => Representation::QP,
        1 => Representation::QLambdaP,
        t => return Err(KvnError::Io(format!("unknown representation tag {t}"))),
    };
    r.read_exact(&mut u32b)?;
    let ndim = u32::from_le_bytes(u32b) as usize;
    let mut axes = Vec::with_capacity(ndim);
    let mut f64b = [0u8; 8];
    for _ in 0..ndim {
        r.read_exact(&mut f64b)?;
        let min = f64::from_le_bytes(f64b);
        r.read_exact(&mut f64b)?;
        let max = f64::from_le_bytes(f64b);
        r.read_exact(&mut f64b)?;
        let count = u64::from_le_bytes(f64b) as usize;
        axes.push(Axis::new(min, max, count)?);
    }
    let grid = PhaseGrid::new(axes, repr)?;
    let mut payload = vec![0u8; grid.len() * 8];
    r.read_exact(&mut payload)?;
    let data = payload
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
            let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]);
            Complex64::new(re as f64, im as f64)
        })
        .collect();
    WaveFunction::from_data(grid, data)
}

/// One row per grid point: coordinates then ρ = |ψ|².
pub fn write_density_csv<W: Write>(psi: &WaveFunction, mut w: W) -> Result<()> {
    let n = psi.grid.n;
    let mut header: Vec<String> = (0..n).map(|i| format!("q{}", i + 1)).collect();
    let pname = match psi.grid.repr {
        Representation::QP => "p",
        Representation::QLambdaP => "lambda_p",
    };
    header.extend((0..n).map(|i| format!("{pname}{}", i + 1)));
    header.push("density".into());
    writeln!(w, "{}", header.join(","))?;
    let rho = psi.density();
    for (i, r) in rho.iter().enumerate() {
        let x = psi.grid.coords(i);
        let mut row: Vec<String> = x.iter().map(|v| format!("{v:.8e}")).collect();
        row.push(format!("{r:.8e}"));
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}
