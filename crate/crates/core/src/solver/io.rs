//! CSV export of field slices and energy logs.
//!
//! Field rows: `step,x1,x<axis>...,component,re,im`, one row per point and
//! component. Floats use 17 significant digits.

use super::{FieldGrid, Grid};
use std::io::{self, Write};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_field_csv<W: Write>(mut w: W, slice: &FieldGrid, grid: &Grid) -> io::Result<()> {
    write!(w, "step,x1")?;
    for ax in &grid.axes {
        write!(w, ",x{}", ax.index)?;
    }
    writeln!(w, ",component,re,im")?;
    for p in 0..slice.num_points() {
        let coords = grid.coordinates(p);
        let prefix: String = coords.iter().map(|c| format!(",{}", fmt_f64(*c))).collect();
        for (c, v) in slice.point(p).iter().enumerate() {
            writeln!(
                w,
                "{},{}{prefix},{c},{},{}",
                slice.step,
                fmt_f64(slice.time),
                fmt_f64(v.re),
                fmt_f64(v.im)
            )?;
        }
    }
    Ok(())
}

/// Rows `step,x1,energy,relative_drift`.
pub fn write_energy_csv<W: Write>(mut w: W, rows: &[(usize, f64, f64)]) -> io::Result<()> {
    writeln!(w, "step,x1,energy,relative_drift")?;
    let e0 = rows.first().map(|r| r.2).unwrap_or(0.0);
    for &(step, t, e) in rows {
        let drift = if e0 != 0.0 { (e - e0) / e0 } else { 0.0 };
        writeln!(w, "{step},{},{},{}", fmt_f64(t), fmt_f64(e), fmt_f64(drift))?;
    }
    Ok(())
}
