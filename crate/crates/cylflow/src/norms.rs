//! Every norm the estimate machinery needs: Lebesgue, first-order Sobolev,
//! distance-weighted, fractional (Gagliardo) on faces and on the volume, the
//! space-time energy norm, and the embedding-condition predicate.
//!
//! Conventions: scalar fields are integrated by the midpoint rule at cell
//! centers; vector fields component-wise at their native face DOFs with the
//! face mass weights, which for p = 2 coincides with the energy inner
//! product. Reductions run in fixed order.

use serde::{Deserialize, Serialize};

use crate::domain::field::{FaceProfile, ScalarField, VectorField};
use crate::domain::grid::StaggeredGrid;
use crate::domain::ops::{collocate, d_cells, Axis};
use crate::domain::quad::dot_mass;
use crate::error::{Error, Result};

/// Norm parameters carried by a run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    /// Integrability exponent.
    pub p: f64,
    /// Smoothness order.
    pub s: f64,
    /// Distance-weight exponent.
    pub mu: f64,
}

impl NormSpec {
    pub fn validate(&self) -> Result<()> {
        if self.p < 1.0 {
            return Err(Error::Parameter(format!(
                "integrability p must be >= 1, got {}",
                self.p
            )));
        }
        if !self.mu.is_finite() {
            return Err(Error::Parameter("weight exponent mu must be finite".into()));
        }
        if !(self.s > 0.0 && self.s < 2.0) {
            return Err(Error::Parameter(format!(
                "smoothness order s must lie in (0, 2), got {}",
                self.s
            )));
        }
        Ok(())
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::Parameter(format!(
            "exponent p must be >= 1, got {p}"
        )));
    }
    Ok(())
}

/// L_p norm of a cell scalar over the volume.
pub fn lp_norm(f: &ScalarField, p: f64) -> Result<f64> {
    check_p(p)?;
    let vol = f.grid.cell_volume();
    let acc: f64 = f.data.iter().map(|v| v.abs().powf(p) * vol).sum();
    Ok(acc.powf(1.0 / p))
}

/// L_p norm of a face velocity field, component-wise at the native DOFs.
pub fn lp_norm_vector(f: &VectorField, p: f64) -> Result<f64> {
    check_p(p)?;
    if (p - 2.0).abs() < 1e-14 {
        return Ok(dot_mass(f, f).sqrt());
    }
    let g = &f.grid;
    let s = g.spec;
    let vol = g.cell_volume();
    let mut acc = 0.0;
    for k in 0..s.nz {
        for j in 0..s.ny {
            for i in 0..=s.nx {
                let w = if i == 0 || i == s.nx { 0.5 * vol } else { vol };
                acc += w * f.u[g.uf(i, j, k)].abs().powf(p);
            }
        }
    }
    for k in 0..s.nz {
        for j in 0..=s.ny {
            for i in 0..s.nx {
                let w = if j == 0 || j == s.ny { 0.5 * vol } else { vol };
                acc += w * f.v[g.vf(i, j, k)].abs().powf(p);
            }
        }
    }
    for k in 0..=s.nz {
        for j in 0..s.ny {
            for i in 0..s.nx {
                let w = if k == 0 || k == s.nz { 0.5 * vol } else { vol };
                acc += w * f.w[g.wf(i, j, k)].abs().powf(p);
            }
        }
    }
    Ok(acc.powf(1.0 / p))
}

/// L_p norm of per-panel values on a boundary patch.
pub fn lp_norm_patch(
    values: &[f64],
    grid: &StaggeredGrid,
    patch: crate::domain::grid::Patch,
    p: f64,
) -> Result<f64> {
    check_p(p)?;
    if values.is_empty() {
        return Err(Error::Domain(format!("empty patch {patch:?}")));
    }
    let area = grid.patch_panel_area(patch);
    let acc: f64 = values.iter().map(|v| v.abs().powf(p) * area).sum();
    Ok(acc.powf(1.0 / p))
}

/// All cell-centered first partials of a cell scalar.
pub fn scalar_gradient_cells(f: &ScalarField) -> [Vec<f64>; 3] {
    let g = &f.grid;
    [
        d_cells(g, &f.data, Axis::X),
        d_cells(g, &f.data, Axis::Y),
        d_cells(g, &f.data, Axis::Z),
    ]
}

/// Distance-weighted norm: `( sum_{|alpha|=k} int |D^alpha f|^p w(x3)^{p mu} )^{1/p}`
/// with `w(x3) = min(a + x3, a - x3)`, the distance to the nearer end face
/// measured along x3.
pub fn weighted_norm(f: &ScalarField, k: usize, p: f64, mu: f64) -> Result<f64> {
    check_p(p)?;
    if k > 2 {
        return Err(Error::Parameter(format!(
            "derivative order k must be 0, 1 or 2, got {k}"
        )));
    }
    let g = &f.grid;
    let s = g.spec;
    let vol = g.cell_volume();

    let derivatives: Vec<Vec<f64>> = match k {
        0 => vec![f.data.clone()],
        1 => scalar_gradient_cells(f).into_iter().collect(),
        _ => {
            let [fx, fy, fz] = scalar_gradient_cells(f);
            vec![
                d_cells(g, &fx, Axis::X),
                d_cells(g, &fy, Axis::Y),
                d_cells(g, &fz, Axis::Z),
                d_cells(g, &fx, Axis::Y),
                d_cells(g, &fx, Axis::Z),
                d_cells(g, &fy, Axis::Z),
            ]
        }
    };

    let mut acc = 0.0;
    for k3 in 0..s.nz {
        let z = -s.a + (k3 as f64 + 0.5) * g.hz;
        let weight = g.end_face_distance(z).powf(p * mu);
        for j in 0..s.ny {
            for i in 0..s.nx {
                let c = g.cell(i, j, k3);
                for d in &derivatives {
                    acc += d[c].abs().powf(p) * weight * vol;
                }
            }
        }
    }
    Ok(acc.powf(1.0 / p))
}

/// Gagliardo seminorm (to the p-th power) of a cross-section profile,
/// by the double midpoint rule excluding the diagonal. The face is 2-D,
/// so the kernel exponent is `2 + sigma p`.
fn gagliardo_seminorm_face_p(g: &FaceProfile, hx: f64, hy: f64, sigma: f64, p: f64) -> f64 {
    let n = g.data.len();
    let w = hx * hy;
    let expo = 2.0 + sigma * p;
    let mut acc = 0.0;
    for q in 0..n {
        let (iq, jq) = (q % g.nx, q / g.nx);
        let xq = (iq as f64 + 0.5) * hx;
        let yq = (jq as f64 + 0.5) * hy;
        for r in (q + 1)..n {
            let (ir, jr) = (r % g.nx, r / g.nx);
            let xr = (ir as f64 + 0.5) * hx;
            let yr = (jr as f64 + 0.5) * hy;
            let dist = ((xq - xr).powi(2) + (yq - yr).powi(2)).sqrt();
            let diff = (g.data[q] - g.data[r]).abs();
            acc += 2.0 * w * w * diff.powf(p) / dist.powf(expo);
        }
    }
    acc
}

/// Fractional boundary norm `W^sigma_p` of a cross-section profile:
/// `(||g||_p^p + [g]_{sigma,p}^p)^(1/p)`.
pub fn gagliardo_norm(g: &FaceProfile, grid: &StaggeredGrid, sigma: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::Parameter(format!(
            "fractional order must lie in (0,1), got {sigma}; integer orders go through the Sobolev norms"
        )));
    }
    let w = grid.hx * grid.hy;
    let lp_p: f64 = g.data.iter().map(|v| v.abs().powf(p) * w).sum();
    let semi_p = gagliardo_seminorm_face_p(g, grid.hx, grid.hy, sigma, p);
    Ok((lp_p + semi_p).powf(1.0 / p))
}

/// Gagliardo seminorm (p-th power) of a cell scalar over the 3-D volume;
/// kernel exponent `3 + sigma p`.
fn gagliardo_seminorm_volume_p(f: &ScalarField, sigma: f64, p: f64) -> f64 {
    let g = &f.grid;
    let s = g.spec;
    let vol = g.cell_volume();
    let expo = 3.0 + sigma * p;
    let n = g.n_cells();
    // Precompute coordinates in index order.
    let mut coords = Vec::with_capacity(n);
    for k in 0..s.nz {
        for j in 0..s.ny {
            for i in 0..s.nx {
                coords.push(g.cell_center(i, j, k));
            }
        }
    }
    let mut acc = 0.0;
    for q in 0..n {
        let [xq, yq, zq] = coords[q];
        let fq = f.data[q];
        for r in (q + 1)..n {
            let [xr, yr, zr] = coords[r];
            let dist2 = (xq - xr).powi(2) + (yq - yr).powi(2) + (zq - zr).powi(2);
            let diff = (fq - f.data[r]).abs();
            if diff != 0.0 {
                acc += 2.0 * vol * vol * diff.powf(p) / dist2.sqrt().powf(expo);
            }
        }
    }
    acc
}

/// First-order Sobolev norm `W^1_p` of a cell scalar.
pub fn sobolev_w1p(f: &ScalarField, p: f64) -> Result<f64> {
    check_p(p)?;
    let vol = f.grid.cell_volume();
    let grads = scalar_gradient_cells(f);
    let mut acc: f64 = f.data.iter().map(|v| v.abs().powf(p) * vol).sum();
    for g in &grads {
        acc += g.iter().map(|v| v.abs().powf(p) * vol).sum::<f64>();
    }
    Ok(acc.powf(1.0 / p))
}

/// Sobolev norm of possibly fractional order `s in (0, 2)` of a cell scalar.
/// Integer order one routes to [`sobolev_w1p`]; fractional parts use the
/// volume Gagliardo seminorm.
pub fn w_sp_norm(f: &ScalarField, s: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(s > 0.0 && s < 2.0) {
        return Err(Error::Parameter(format!(
            "order s must lie in (0,2), got {s}"
        )));
    }
    if (s - 1.0).abs() < 1e-12 {
        return sobolev_w1p(f, p);
    }
    if s < 1.0 {
        let vol = f.grid.cell_volume();
        let lp_p: f64 = f.data.iter().map(|v| v.abs().powf(p) * vol).sum();
        let semi = gagliardo_seminorm_volume_p(f, s, p);
        Ok((lp_p + semi).powf(1.0 / p))
    } else {
        let sigma = s - 1.0;
        let w1 = sobolev_w1p(f, p)?;
        let grads = scalar_gradient_cells(f);
        let mut acc = w1.powf(p);
        for gr in grads {
            let gf = ScalarField {
                grid: f.grid.clone(),
                data: gr,
            };
            acc += gagliardo_seminorm_volume_p(&gf, sigma, p);
        }
        Ok(acc.powf(1.0 / p))
    }
}

/// Integral of the squared full velocity gradient, `int sum_ij |dv_i/dx_j|^2`.
/// Diagonal entries come from the compact face differences, the mixed ones
/// from the collocated components.
pub fn grad_sq_integral(f: &VectorField) -> f64 {
    let g = &f.grid;
    let s = g.spec;
    let vol = g.cell_volume();
    let [uc, vc, wc] = collocate(f);
    let mut acc = 0.0;

    for k in 0..s.nz {
        for j in 0..s.ny {
            for i in 0..s.nx {
                let du = (f.u[g.uf(i + 1, j, k)] - f.u[g.uf(i, j, k)]) / g.hx;
                let dv = (f.v[g.vf(i, j + 1, k)] - f.v[g.vf(i, j, k)]) / g.hy;
                let dw = (f.w[g.wf(i, j, k + 1)] - f.w[g.wf(i, j, k)]) / g.hz;
                acc += (du * du + dv * dv + dw * dw) * vol;
            }
        }
    }
    for (cells, axes) in [
        (&uc, [Axis::Y, Axis::Z]),
        (&vc, [Axis::X, Axis::Z]),
        (&wc, [Axis::X, Axis::Y]),
    ] {
        for axis in axes {
            let d = d_cells(g, cells, axis);
            acc += d.iter().map(|v| v * v * vol).sum::<f64>();
        }
    }
    acc
}

/// Squared discrete H1 norm: L2 part plus the full gradient integral.
pub fn h1_sq(f: &VectorField) -> f64 {
    dot_mass(f, f) + grad_sq_integral(f)
}

/// Space-time energy norm over a sampled history with uniform step `dt`:
/// `max_t ||u||_{L2} + (int_0^T ||grad u||_{L2}^2 dt)^{1/2}`, the time
/// integral by the trapezoid rule.
pub fn v02_norm(history: &[VectorField], dt: f64) -> Result<f64> {
    if history.is_empty() {
        return Err(Error::Domain("empty history in the space-time norm".into()));
    }
    let mut sup = 0.0f64;
    let mut grads = Vec::with_capacity(history.len());
    for u in history {
        sup = sup.max(dot_mass(u, u).sqrt());
        grads.push(grad_sq_integral(u));
    }
    let mut integral = 0.0;
    for i in 1..grads.len() {
        integral += 0.5 * (grads[i - 1] + grads[i]) * dt;
    }
    Ok(sup + integral.sqrt())
}

/// Embedding condition on the trace-space parameters: true iff
/// `p > 3 and 3/p + 1/3 <= s`, or `p = 3 and s > 4/3` (strict).
pub fn embedding_ok(s: f64, p: f64) -> Result<bool> {
    if p < 3.0 {
        return Err(Error::Parameter(format!(
            "integrability p must be >= 3 for the embedding condition, got {p}"
        )));
    }
    if p == 3.0 {
        Ok(s > 4.0 / 3.0)
    } else {
        Ok(3.0 / p + 1.0 / 3.0 <= s + 1e-12)
    }
}
