//! Midpoint quadrature over the volume and the boundary patches, plus the
//! mass-weighted inner products used by the evolution module.
//!
//! All reductions run in a fixed linear-index order so results are
//! bit-reproducible.

use crate::domain::field::{ScalarField, VectorField};
use crate::domain::grid::{Patch, StaggeredGrid};
use crate::error::{Error, Result};

/// Volume integral of a cell scalar, midpoint rule.
pub fn integrate_volume(f: &ScalarField) -> f64 {
    let vol = f.grid.cell_volume();
    f.data.iter().sum::<f64>() * vol
}

/// Surface integral of per-panel values over a boundary patch.
pub fn integrate_surface(values: &[f64], grid: &StaggeredGrid, patch: Patch) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Domain(format!("empty patch {patch:?}")));
    }
    if values.len() != grid.patch_panel_count(patch) {
        return Err(Error::Shape(format!(
            "patch {patch:?} expects {} panel values, got {}",
            grid.patch_panel_count(patch),
            values.len()
        )));
    }
    Ok(values.iter().sum::<f64>() * grid.patch_panel_area(patch))
}

/// Face quadrature weight of a velocity DOF: full cell volume in the
/// interior, half on the boundary-normal faces it shares with the wall.
#[inline]
fn face_weight(on_boundary: bool, vol: f64) -> f64 {
    if on_boundary {
        0.5 * vol
    } else {
        vol
    }
}

/// Mass-weighted inner product of two face velocity fields.
pub fn dot_mass(a: &VectorField, b: &VectorField) -> f64 {
    let g = &a.grid;
    let s = g.spec;
    let vol = g.cell_volume();
    let mut acc = 0.0;
    for k in 0..s.nz {
        for j in 0..s.ny {
            for i in 0..=s.nx {
                let idx = g.uf(i, j, k);
                acc += face_weight(i == 0 || i == s.nx, vol) * a.u[idx] * b.u[idx];
            }
        }
    }
    for k in 0..s.nz {
        for j in 0..=s.ny {
            for i in 0..s.nx {
                let idx = g.vf(i, j, k);
                acc += face_weight(j == 0 || j == s.ny, vol) * a.v[idx] * b.v[idx];
            }
        }
    }
    for k in 0..=s.nz {
        for j in 0..s.ny {
            for i in 0..s.nx {
                let idx = g.wf(i, j, k);
                acc += face_weight(k == 0 || k == s.nz, vol) * a.w[idx] * b.w[idx];
            }
        }
    }
    acc
}

/// Mass-weighted L2 norm of a face velocity field.
pub fn norm_l2_mass(a: &VectorField) -> f64 {
    dot_mass(a, a).sqrt()
}

/// Multiplies a face field by the face mass, turning it into a covector
/// whose plain dot against another field is the mass inner product.
pub fn apply_mass(field: &mut VectorField) {
    let g = field.grid.clone();
    let s = g.spec;
    let vol = g.cell_volume();
    for k in 0..s.nz {
        for j in 0..s.ny {
            for i in 0..=s.nx {
                let idx = g.uf(i, j, k);
                field.u[idx] *= face_weight(i == 0 || i == s.nx, vol);
            }
        }
    }
    for k in 0..s.nz {
        for j in 0..=s.ny {
            for i in 0..s.nx {
                let idx = g.vf(i, j, k);
                field.v[idx] *= face_weight(j == 0 || j == s.ny, vol);
            }
        }
    }
    for k in 0..=s.nz {
        for j in 0..s.ny {
            for i in 0..s.nx {
                let idx = g.wf(i, j, k);
                field.w[idx] *= face_weight(k == 0 || k == s.nz, vol);
            }
        }
    }
}

/// Applies the inverse face mass to an assembled covector, turning a form
/// residual back into a face field.
pub fn apply_inverse_mass(field: &mut VectorField) {
    let g = field.grid.clone();
    let s = g.spec;
    let vol = g.cell_volume();
    for k in 0..s.nz {
        for j in 0..s.ny {
            for i in 0..=s.nx {
                let idx = g.uf(i, j, k);
                field.u[idx] /= face_weight(i == 0 || i == s.nx, vol);
            }
        }
    }
    for k in 0..s.nz {
        for j in 0..=s.ny {
            for i in 0..s.nx {
                let idx = g.vf(i, j, k);
                field.v[idx] /= face_weight(j == 0 || j == s.ny, vol);
            }
        }
    }
    for k in 0..=s.nz {
        for j in 0..s.ny {
            for i in 0..s.nx {
                let idx = g.wf(i, j, k);
                field.w[idx] /= face_weight(k == 0 || k == s.nz, vol);
            }
        }
    }
}
