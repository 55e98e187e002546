//! Binary field snapshots and plain-text flux files.
//!
//! A snapshot is a header (u8 axis count, the 1-based axes as u8, u32 LE
//! resolution, u8 degree) followed by little-endian f64 coefficients, point
//! by point and lexicographic blade order within each point. Trajectories are
//! snapshots written back to back.

use std::io::{Read, Write};

use super::field::FormField;
use super::grid::TorusGrid;
use crate::{Error, Result};

pub fn write_snapshot(w: &mut impl Write, f: &FormField) -> Result<()> {
    let g = f.grid();
    w.write_all(&[g.rank() as u8])?;
    let axes: Vec<u8> = g.axes().iter().map(|&a| a as u8).collect();
    w.write_all(&axes)?;
    w.write_all(&(g.n() as u32).to_le_bytes())?;
    w.write_all(&[f.degree() as u8])?;
    for p in 0..g.points() {
        for c in 0..f.components() {
            w.write_all(&f.component(c)[p].to_le_bytes())?;
        }
    }
    Ok(())
}

/// Read one snapshot; `Ok(None)` at a clean end of input.
pub fn read_snapshot(r: &mut impl Read) -> Result<Option<FormField>> {
    let mut rank = [0u8; 1];
    match r.read(&mut rank)? {
        0 => return Ok(None),
        _ => {}
    }
    let mut axes = vec![0u8; rank[0] as usize];
    r.read_exact(&mut axes).map_err(truncated)?;
    let mut n = [0u8; 4];
    r.read_exact(&mut n).map_err(truncated)?;
    let mut degree = [0u8; 1];
    r.read_exact(&mut degree).map_err(truncated)?;
    let axes: Vec<usize> = axes.into_iter().map(usize::from).collect();
    let grid = TorusGrid::new(&axes, u32::from_le_bytes(n) as usize)?;
    let degree = degree[0] as usize;
    let blank = FormField::zeros(&grid, degree)?;
    let (np, nc) = (grid.points(), blank.components());
    let mut raw = vec![0u8; 8 * np * nc];
    r.read_exact(&mut raw).map_err(truncated)?;
    let mut data = vec![0.0; np * nc];
    for (i, chunk) in raw.chunks_exact(8).enumerate() {
        let (p, c) = (i / nc, i % nc);
        data[c * np + p] = f64::from_le_bytes(chunk.try_into().expect("8 bytes"));
    }
    FormField::from_data(&grid, degree, data).map(Some)
}

fn truncated(e: std::io::Error) -> Error {
    Error::InvalidInput(format!("truncated snapshot: {e}"))
}

/// Read every snapshot in a stream.
pub fn read_snapshots(r: &mut impl Read) -> Result<Vec<FormField>> {
    let mut out = Vec::new();
    while let Some(f) = read_snapshot(r)? {
        out.push(f);
    }
    Ok(out)
}
