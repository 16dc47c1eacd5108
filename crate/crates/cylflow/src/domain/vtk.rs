//! Legacy-ASCII VTK export of field snapshots.
//!
//! Fields are written as STRUCTURED_POINTS point data sampled at the cell
//! centers, one file per field per snapshot.

use std::io::Write;
use std::path::Path;

use crate::domain::field::{ScalarField, VectorField};
use crate::domain::ops::collocate;
use crate::error::Result;

fn header(
    w: &mut impl Write,
    grid: &crate::domain::grid::StaggeredGrid,
    title: &str,
) -> Result<()> {
    let s = grid.spec;
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "{title}")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_POINTS")?;
    writeln!(w, "DIMENSIONS {} {} {}", s.nx, s.ny, s.nz)?;
    writeln!(
        w,
        "ORIGIN {} {} {}",
        0.5 * grid.hx,
        0.5 * grid.hy,
        -s.a + 0.5 * grid.hz
    )?;
    writeln!(w, "SPACING {} {} {}", grid.hx, grid.hy, grid.hz)?;
    writeln!(w, "POINT_DATA {}", s.nx * s.ny * s.nz)?;
    Ok(())
}

pub fn write_scalar(path: &Path, name: &str, field: &ScalarField) -> Result<()> {
    let mut buf = Vec::new();
    header(&mut buf, &field.grid, name)?;
    writeln!(buf, "SCALARS {name} double 1")?;
    writeln!(buf, "LOOKUP_TABLE default")?;
    for v in &field.data {
        writeln!(buf, "{v}")?;
    }
    std::fs::write(path, buf)?;
    Ok(())
}

pub fn write_vector(path: &Path, name: &str, field: &VectorField) -> Result<()> {
    let [uc, vc, wc] = collocate(field);
    let mut buf = Vec::new();
    header(&mut buf, &field.grid, name)?;
    writeln!(buf, "VECTORS {name} double")?;
    for c in 0..field.grid.n_cells() {
        writeln!(buf, "{} {} {}", uc[c], vc[c], wc[c])?;
    }
    std::fs::write(path, buf)?;
    Ok(())
}
