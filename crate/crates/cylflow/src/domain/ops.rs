//! Discrete calculus on the staggered grid.
//!
//! Divergence, gradient and Laplacian follow the compact MAC stencils, so
//! div-grad duality is exact up to the Neumann boundary closure. The strain
//! tensor and everything derived from it (tangential traces, tractions) use
//! cell-centered differences, second-order one-sided at the boundary layers.
//!
//! Each sampling operator that participates in a quadratic form comes with an
//! explicit transpose; the energy identities of the evolution module rely on
//! the pairs being exact adjoints of each other.

use std::sync::Arc;

use crate::domain::field::{ScalarField, VectorField};
use crate::domain::grid::{Patch, StaggeredGrid};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl StaggeredGrid {
    pub fn axis_len(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.spec.nx,
            Axis::Y => self.spec.ny,
            Axis::Z => self.spec.nz,
        }
    }

    pub fn axis_h(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.hx,
            Axis::Y => self.hy,
            Axis::Z => self.hz,
        }
    }

    fn axis_stride(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => 1,
            Axis::Y => self.spec.nx,
            Axis::Z => self.spec.nx * self.spec.ny,
        }
    }

    /// Iterates the base index of every grid line along `axis`.
    fn axis_lines(&self, axis: Axis) -> Vec<usize> {
        let s = self.spec;
        let mut lines = Vec::new();
        match axis {
            Axis::X => {
                for k in 0..s.nz {
                    for j in 0..s.ny {
                        lines.push(self.cell(0, j, k));
                    }
                }
            }
            Axis::Y => {
                for k in 0..s.nz {
                    for i in 0..s.nx {
                        lines.push(self.cell(i, 0, k));
                    }
                }
            }
            Axis::Z => {
                for j in 0..s.ny {
                    for i in 0..s.nx {
                        lines.push(self.cell(i, j, 0));
                    }
                }
            }
        }
        lines
    }
}

/// Cell-centered divergence of a face velocity field; exact for fields whose
/// components are linear in their own coordinate.
pub fn divergence(field: &VectorField) -> ScalarField {
    let g = &field.grid;
    let s = g.spec;
    let mut out = ScalarField::zeros(g);
    for k in 0..s.nz {
        for j in 0..s.ny {
            for i in 0..s.nx {
                let du = (field.u[g.uf(i + 1, j, k)] - field.u[g.uf(i, j, k)]) / g.hx;
                let dv = (field.v[g.vf(i, j + 1, k)] - field.v[g.vf(i, j, k)]) / g.hy;
                let dw = (field.w[g.wf(i, j, k + 1)] - field.w[g.wf(i, j, k)]) / g.hz;
                out.data[g.cell(i, j, k)] = du + dv + dw;
            }
        }
    }
    out
}

/// Face gradient of a cell scalar with zero normal component on the boundary
/// (the Neumann closure used by the potential solve).
pub fn gradient(field: &ScalarField) -> VectorField {
    let g = &field.grid;
    let s = g.spec;
    let q = &field.data;
    let mut out = VectorField::zeros(g);
    for k in 0..s.nz {
        for j in 0..s.ny {
            for i in 1..s.nx {
                out.u[g.uf(i, j, k)] = (q[g.cell(i, j, k)] - q[g.cell(i - 1, j, k)]) / g.hx;
            }
        }
    }
    for k in 0..s.nz {
        for j in 1..s.ny {
            for i in 0..s.nx {
                out.v[g.vf(i, j, k)] = (q[g.cell(i, j, k)] - q[g.cell(i, j - 1, k)]) / g.hy;
            }
        }
    }
    for k in 1..s.nz {
        for j in 0..s.ny {
            for i in 0..s.nx {
                out.w[g.wf(i, j, k)] = (q[g.cell(i, j, k)] - q[g.cell(i, j, k - 1)]) / g.hz;
            }
        }
    }
    out
}

/// Seven-point Neumann Laplacian, `div(grad(.))` with the zero-flux closure.
pub fn laplacian(field: &ScalarField) -> ScalarField {
    divergence(&gradient(field))
}

/// Averages each velocity component from its faces to cell centers.
pub fn collocate(field: &VectorField) -> [Vec<f64>; 3] {
    let g = &field.grid;
    let s = g.spec;
    let n = g.n_cells();
    let mut uc = vec![0.0; n];
    let mut vc = vec![0.0; n];
    let mut wc = vec![0.0; n];
    for k in 0..s.nz {
        for j in 0..s.ny {
            for i in 0..s.nx {
                let c = g.cell(i, j, k);
                uc[c] = 0.5 * (field.u[g.uf(i, j, k)] + field.u[g.uf(i + 1, j, k)]);
                vc[c] = 0.5 * (field.v[g.vf(i, j, k)] + field.v[g.vf(i, j + 1, k)]);
                wc[c] = 0.5 * (field.w[g.wf(i, j, k)] + field.w[g.wf(i, j, k + 1)]);
            }
        }
    }
    [uc, vc, wc]
}

/// Transpose of [`collocate`]: scatters cell values back to the faces with
/// the same averaging weights. `comp` selects which velocity component the
/// cell data belongs to.
pub fn collocate_transpose(grid: &Arc<StaggeredGrid>, cells: &[f64], comp: usize) -> VectorField {
    let g = grid;
    let s = g.spec;
    let mut out = VectorField::zeros(grid);
    for k in 0..s.nz {
        for j in 0..s.ny {
            for i in 0..s.nx {
                let x = 0.5 * cells[g.cell(i, j, k)];
                match comp {
                    0 => {
                        out.u[g.uf(i, j, k)] += x;
                        out.u[g.uf(i + 1, j, k)] += x;
                    }
                    1 => {
                        out.v[g.vf(i, j, k)] += x;
                        out.v[g.vf(i, j + 1, k)] += x;
                    }
                    _ => {
                        out.w[g.wf(i, j, k)] += x;
                        out.w[g.wf(i, j, k + 1)] += x;
                    }
                }
            }
        }
    }
    out
}

/// Cell-centered partial derivative of a cell field along `axis`: centered in
/// the interior, second-order one-sided on the first and last cell layers.
pub fn d_cells(grid: &StaggeredGrid, data: &[f64], axis: Axis) -> Vec<f64> {
    let n = grid.axis_len(axis);
    let h = grid.axis_h(axis);
    let stride = grid.axis_stride(axis);
    let mut out = vec![0.0; data.len()];
    for base in grid.axis_lines(axis) {
        let at = |m: usize| data[base + m * stride];
        out[base] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
        for m in 1..n - 1 {
            out[base + m * stride] = (at(m + 1) - at(m - 1)) / (2.0 * h);
        }
        out[base + (n - 1) * stride] = (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
    }
    out
}

/// Transpose of [`d_cells`].
pub fn d_cells_transpose(grid: &StaggeredGrid, data: &[f64], axis: Axis) -> Vec<f64> {
    let n = grid.axis_len(axis);
    let h = grid.axis_h(axis);
    let stride = grid.axis_stride(axis);
    let mut out = vec![0.0; data.len()];
    let inv2h = 1.0 / (2.0 * h);
    for base in grid.axis_lines(axis) {
        let x0 = data[base];
        out[base] += -3.0 * x0 * inv2h;
        out[base + stride] += 4.0 * x0 * inv2h;
        out[base + 2 * stride] += -x0 * inv2h;
        for m in 1..n - 1 {
            let x = data[base + m * stride];
            out[base + (m + 1) * stride] += x * inv2h;
            out[base + (m - 1) * stride] -= x * inv2h;
        }
        let xn = data[base + (n - 1) * stride];
        out[base + (n - 1) * stride] += 3.0 * xn * inv2h;
        out[base + (n - 2) * stride] += -4.0 * xn * inv2h;
        out[base + (n - 3) * stride] += xn * inv2h;
    }
    out
}

/// Symmetric strain tensor `D(v) = {v_i,xj + v_j,xi}` at cell centers,
/// stored as six components.
#[derive(Debug, Clone)]
pub struct StrainField {
    pub grid: Arc<StaggeredGrid>,
    pub xx: Vec<f64>,
    pub yy: Vec<f64>,
    pub zz: Vec<f64>,
    pub xy: Vec<f64>,
    pub xz: Vec<f64>,
    pub yz: Vec<f64>,
}

impl StrainField {
    /// Frobenius-style contraction with off-diagonal multiplicity two.
    pub fn contract_at(&self, other: &StrainField, c: usize) -> f64 {
        self.xx[c] * other.xx[c]
            + self.yy[c] * other.yy[c]
            + self.zz[c] * other.zz[c]
            + 2.0 * (self.xy[c] * other.xy[c] + self.xz[c] * other.xz[c] + self.yz[c] * other.yz[c])
    }
}

/// Strain of a face velocity field.
///
/// Diagonal entries come straight from the compact face differences (exact
/// for linear fields); the mixed entries differentiate the collocated
/// components, one-sided on the boundary layers.
pub fn strain(field: &VectorField) -> StrainField {
    let g = &field.grid;
    let s = g.spec;
    let n = g.n_cells();
    let [uc, vc, wc] = collocate(field);

    let mut xx = vec![0.0; n];
    let mut yy = vec![0.0; n];
    let mut zz = vec![0.0; n];
    for k in 0..s.nz {
        for j in 0..s.ny {
            for i in 0..s.nx {
                let c = g.cell(i, j, k);
                xx[c] = 2.0 * (field.u[g.uf(i + 1, j, k)] - field.u[g.uf(i, j, k)]) / g.hx;
                yy[c] = 2.0 * (field.v[g.vf(i, j + 1, k)] - field.v[g.vf(i, j, k)]) / g.hy;
                zz[c] = 2.0 * (field.w[g.wf(i, j, k + 1)] - field.w[g.wf(i, j, k)]) / g.hz;
            }
        }
    }

    let du_dy = d_cells(g, &uc, Axis::Y);
    let du_dz = d_cells(g, &uc, Axis::Z);
    let dv_dx = d_cells(g, &vc, Axis::X);
    let dv_dz = d_cells(g, &vc, Axis::Z);
    let dw_dx = d_cells(g, &wc, Axis::X);
    let dw_dy = d_cells(g, &wc, Axis::Y);

    let mut xy = vec![0.0; n];
    let mut xz = vec![0.0; n];
    let mut yz = vec![0.0; n];
    for c in 0..n {
        xy[c] = du_dy[c] + dv_dx[c];
        xz[c] = du_dz[c] + dw_dx[c];
        yz[c] = dv_dz[c] + dw_dy[c];
    }

    StrainField {
        grid: Arc::clone(g),
        xx,
        yy,
        zz,
        xy,
        xz,
        yz,
    }
}

/// Transpose of [`strain`]: maps six cell-component arrays back to a face
/// field so that `dot(strain(phi), s) = dot(phi, strain_transpose(s))`,
/// with the plain (unweighted, multiplicity-one) component dot on both sides.
pub fn strain_transpose(grid: &Arc<StaggeredGrid>, s: &StrainField) -> VectorField {
    let g = grid;
    let sp = g.spec;
    let mut out = VectorField::zeros(grid);

    for k in 0..sp.nz {
        for j in 0..sp.ny {
            for i in 0..sp.nx {
                let c = g.cell(i, j, k);
                let fxx = 2.0 * s.xx[c] / g.hx;
                out.u[g.uf(i + 1, j, k)] += fxx;
                out.u[g.uf(i, j, k)] -= fxx;
                let fyy = 2.0 * s.yy[c] / g.hy;
                out.v[g.vf(i, j + 1, k)] += fyy;
                out.v[g.vf(i, j, k)] -= fyy;
                let fzz = 2.0 * s.zz[c] / g.hz;
                out.w[g.wf(i, j, k + 1)] += fzz;
                out.w[g.wf(i, j, k)] -= fzz;
            }
        }
    }

    // xy feeds du/dy and dv/dx, xz feeds du/dz and dw/dx, yz feeds dv/dz and dw/dy.
    let add_mixed = |cells: &[f64], axis: Axis, comp: usize, out: &mut VectorField| {
        let t = d_cells_transpose(g, cells, axis);
        let back = collocate_transpose(grid, &t, comp);
        out.axpy(1.0, &back);
    };
    add_mixed(&s.xy, Axis::Y, 0, &mut out);
    add_mixed(&s.xy, Axis::X, 1, &mut out);
    add_mixed(&s.xz, Axis::Z, 0, &mut out);
    add_mixed(&s.xz, Axis::X, 2, &mut out);
    add_mixed(&s.yz, Axis::Z, 1, &mut out);
    add_mixed(&s.yz, Axis::Y, 2, &mut out);

    out
}

/// Extrapolates a cell field to the quadrature panels of a boundary patch
/// (second order, using the two cell layers nearest the wall).
pub fn extrapolate_to_patch(grid: &StaggeredGrid, cells: &[f64], patch: Patch) -> Vec<f64> {
    let s = grid.spec;
    let mut out = vec![0.0; grid.patch_panel_count(patch)];
    match patch {
        Patch::S1X0 => {
            for k in 0..s.nz {
                for j in 0..s.ny {
                    out[k * s.ny + j] =
                        1.5 * cells[grid.cell(0, j, k)] - 0.5 * cells[grid.cell(1, j, k)];
                }
            }
        }
        Patch::S1X1 => {
            for k in 0..s.nz {
                for j in 0..s.ny {
                    out[k * s.ny + j] = 1.5 * cells[grid.cell(s.nx - 1, j, k)]
                        - 0.5 * cells[grid.cell(s.nx - 2, j, k)];
                }
            }
        }
        Patch::S1Y0 => {
            for k in 0..s.nz {
                for i in 0..s.nx {
                    out[k * s.nx + i] =
                        1.5 * cells[grid.cell(i, 0, k)] - 0.5 * cells[grid.cell(i, 1, k)];
                }
            }
        }
        Patch::S1Y1 => {
            for k in 0..s.nz {
                for i in 0..s.nx {
                    out[k * s.nx + i] = 1.5 * cells[grid.cell(i, s.ny - 1, k)]
                        - 0.5 * cells[grid.cell(i, s.ny - 2, k)];
                }
            }
        }
        Patch::S2Lo => {
            for j in 0..s.ny {
                for i in 0..s.nx {
                    out[j * s.nx + i] =
                        1.5 * cells[grid.cell(i, j, 0)] - 0.5 * cells[grid.cell(i, j, 1)];
                }
            }
        }
        Patch::S2Hi => {
            for j in 0..s.ny {
                for i in 0..s.nx {
                    out[j * s.nx + i] = 1.5 * cells[grid.cell(i, j, s.nz - 1)]
                        - 0.5 * cells[grid.cell(i, j, s.nz - 2)];
                }
            }
        }
    }
    out
}

/// Transpose of [`extrapolate_to_patch`].
pub fn extrapolate_to_patch_transpose(
    grid: &StaggeredGrid,
    panel_values: &[f64],
    patch: Patch,
) -> Vec<f64> {
    let s = grid.spec;
    let mut out = vec![0.0; grid.n_cells()];
    let mut scatter = |c0: usize, c1: usize, x: f64| {
        out[c0] += 1.5 * x;
        out[c1] -= 0.5 * x;
    };
    match patch {
        Patch::S1X0 => {
            for k in 0..s.nz {
                for j in 0..s.ny {
                    scatter(
                        grid.cell(0, j, k),
                        grid.cell(1, j, k),
                        panel_values[k * s.ny + j],
                    );
                }
            }
        }
        Patch::S1X1 => {
            for k in 0..s.nz {
                for j in 0..s.ny {
                    scatter(
                        grid.cell(s.nx - 1, j, k),
                        grid.cell(s.nx - 2, j, k),
                        panel_values[k * s.ny + j],
                    );
                }
            }
        }
        Patch::S1Y0 => {
            for k in 0..s.nz {
                for i in 0..s.nx {
                    scatter(
                        grid.cell(i, 0, k),
                        grid.cell(i, 1, k),
                        panel_values[k * s.nx + i],
                    );
                }
            }
        }
        Patch::S1Y1 => {
            for k in 0..s.nz {
                for i in 0..s.nx {
                    scatter(
                        grid.cell(i, s.ny - 1, k),
                        grid.cell(i, s.ny - 2, k),
                        panel_values[k * s.nx + i],
                    );
                }
            }
        }
        Patch::S2Lo => {
            for j in 0..s.ny {
                for i in 0..s.nx {
                    scatter(
                        grid.cell(i, j, 0),
                        grid.cell(i, j, 1),
                        panel_values[j * s.nx + i],
                    );
                }
            }
        }
        Patch::S2Hi => {
            for j in 0..s.ny {
                for i in 0..s.nx {
                    scatter(
                        grid.cell(i, j, s.nz - 1),
                        grid.cell(i, j, s.nz - 2),
                        panel_values[j * s.nx + i],
                    );
                }
            }
        }
    }
    out
}

/// Which collocated components carry the two tangential directions of a
/// lateral patch, with the frame sign: (component index, sign) per tangent.
pub fn lateral_tangent_layout(patch: Patch) -> [(usize, f64); 2] {
    match patch {
        Patch::S1X0 => [(1, -1.0), (2, 1.0)],
        Patch::S1X1 => [(1, 1.0), (2, 1.0)],
        Patch::S1Y0 => [(0, 1.0), (2, 1.0)],
        Patch::S1Y1 => [(0, -1.0), (2, 1.0)],
        _ => panic!("lateral_tangent_layout called with an end-face patch"),
    }
}

/// Tangential velocity components `v . tau_1`, `v . tau_2` at the quadrature
/// panels of a lateral patch.
pub fn tangential_samples(field: &VectorField, patch: Patch) -> [Vec<f64>; 2] {
    let g = &field.grid;
    let comps = collocate(field);
    let layout = lateral_tangent_layout(patch);
    let mut out: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    for (slot, (comp, sign)) in layout.iter().enumerate() {
        let mut vals = extrapolate_to_patch(g, &comps[*comp], patch);
        if *sign < 0.0 {
            for v in &mut vals {
                *v = -*v;
            }
        }
        out[slot] = vals;
    }
    out
}

/// Transpose of [`tangential_samples`] summed over both tangents.
pub fn tangential_samples_transpose(
    grid: &Arc<StaggeredGrid>,
    samples: &[Vec<f64>; 2],
    patch: Patch,
) -> VectorField {
    let layout = lateral_tangent_layout(patch);
    let mut out = VectorField::zeros(grid);
    for (slot, (comp, sign)) in layout.iter().enumerate() {
        let mut vals = samples[slot].clone();
        if *sign < 0.0 {
            for v in &mut vals {
                *v = -*v;
            }
        }
        let cells = extrapolate_to_patch_transpose(grid, &vals, patch);
        let back = collocate_transpose(grid, &cells, *comp);
        out.axpy(1.0, &back);
    }
    out
}

/// Boundary traction components `n . D(v) . tau_alpha` on a patch, sampled at
/// the quadrature panels from the cell strain field.
pub fn traction_samples(strain: &StrainField, patch: Patch) -> [Vec<f64>; 2] {
    let g = &strain.grid;
    // (component array, sign) per tangent, from the frame of each patch.
    let pick = |name: usize| -> &Vec<f64> {
        match name {
            0 => &strain.xy,
            1 => &strain.xz,
            _ => &strain.yz,
        }
    };
    let ((c1, s1), (c2, s2)): ((usize, f64), (usize, f64)) = match patch {
        Patch::S2Lo => ((1, -1.0), (2, -1.0)),
        Patch::S2Hi => ((1, 1.0), (2, 1.0)),
        Patch::S1X0 => ((0, 1.0), (1, -1.0)),
        Patch::S1X1 => ((0, 1.0), (1, 1.0)),
        Patch::S1Y0 => ((0, -1.0), (2, -1.0)),
        Patch::S1Y1 => ((0, -1.0), (2, 1.0)),
    };
    let mut t1 = extrapolate_to_patch(g, pick(c1), patch);
    for v in &mut t1 {
        *v *= s1;
    }
    let mut t2 = extrapolate_to_patch(g, pick(c2), patch);
    for v in &mut t2 {
        *v *= s2;
    }
    [t1, t2]
}

/// Divergence of a symmetric cell tensor, mapped to the velocity faces.
/// Used when the momentum source is assembled as a pointwise field.
pub fn divergence_of_tensor(s: &StrainField) -> VectorField {
    let g = &s.grid;
    let sp = g.spec;
    let mut out = VectorField::zeros(g);

    // Normal-direction derivative straight from adjacent cells; transverse
    // derivatives averaged from the cell-centered ones.
    let avg_to_u = |cells: &[f64], out_u: &mut [f64]| {
        for k in 0..sp.nz {
            for j in 0..sp.ny {
                for i in 0..=sp.nx {
                    let val = if i == 0 {
                        1.5 * cells[g.cell(0, j, k)] - 0.5 * cells[g.cell(1, j, k)]
                    } else if i == sp.nx {
                        1.5 * cells[g.cell(sp.nx - 1, j, k)] - 0.5 * cells[g.cell(sp.nx - 2, j, k)]
                    } else {
                        0.5 * (cells[g.cell(i - 1, j, k)] + cells[g.cell(i, j, k)])
                    };
                    out_u[g.uf(i, j, k)] += val;
                }
            }
        }
    };
    let avg_to_v = |cells: &[f64], out_v: &mut [f64]| {
        for k in 0..sp.nz {
            for j in 0..=sp.ny {
                for i in 0..sp.nx {
                    let val = if j == 0 {
                        1.5 * cells[g.cell(i, 0, k)] - 0.5 * cells[g.cell(i, 1, k)]
                    } else if j == sp.ny {
                        1.5 * cells[g.cell(i, sp.ny - 1, k)] - 0.5 * cells[g.cell(i, sp.ny - 2, k)]
                    } else {
                        0.5 * (cells[g.cell(i, j - 1, k)] + cells[g.cell(i, j, k)])
                    };
                    out_v[g.vf(i, j, k)] += val;
                }
            }
        }
    };
    let avg_to_w = |cells: &[f64], out_w: &mut [f64]| {
        for k in 0..=sp.nz {
            for j in 0..sp.ny {
                for i in 0..sp.nx {
                    let val = if k == 0 {
                        1.5 * cells[g.cell(i, j, 0)] - 0.5 * cells[g.cell(i, j, 1)]
                    } else if k == sp.nz {
                        1.5 * cells[g.cell(i, j, sp.nz - 1)] - 0.5 * cells[g.cell(i, j, sp.nz - 2)]
                    } else {
                        0.5 * (cells[g.cell(i, j, k - 1)] + cells[g.cell(i, j, k)])
                    };
                    out_w[g.wf(i, j, k)] += val;
                }
            }
        }
    };

    // u-component: d/dx xx + d/dy xy + d/dz xz
    {
        for k in 0..sp.nz {
            for j in 0..sp.ny {
                for i in 0..=sp.nx {
                    let val = if i == 0 {
                        (-2.0 * s.xx[g.cell(0, j, k)] + 3.0 * s.xx[g.cell(1, j, k)]
                            - s.xx[g.cell(2, j, k)])
                            / g.hx
                    } else if i == sp.nx {
                        (2.0 * s.xx[g.cell(sp.nx - 1, j, k)] - 3.0 * s.xx[g.cell(sp.nx - 2, j, k)]
                            + s.xx[g.cell(sp.nx - 3, j, k)])
                            / g.hx
                    } else {
                        (s.xx[g.cell(i, j, k)] - s.xx[g.cell(i - 1, j, k)]) / g.hx
                    };
                    out.u[g.uf(i, j, k)] += val;
                }
            }
        }
        avg_to_u(&d_cells(g, &s.xy, Axis::Y), &mut out.u);
        avg_to_u(&d_cells(g, &s.xz, Axis::Z), &mut out.u);
    }

    // v-component: d/dx xy + d/dy yy + d/dz yz
    {
        avg_to_v(&d_cells(g, &s.xy, Axis::X), &mut out.v);
        for k in 0..sp.nz {
            for j in 0..=sp.ny {
                for i in 0..sp.nx {
                    let val = if j == 0 {
                        (-2.0 * s.yy[g.cell(i, 0, k)] + 3.0 * s.yy[g.cell(i, 1, k)]
                            - s.yy[g.cell(i, 2, k)])
                            / g.hy
                    } else if j == sp.ny {
                        (2.0 * s.yy[g.cell(i, sp.ny - 1, k)] - 3.0 * s.yy[g.cell(i, sp.ny - 2, k)]
                            + s.yy[g.cell(i, sp.ny - 3, k)])
                            / g.hy
                    } else {
                        (s.yy[g.cell(i, j, k)] - s.yy[g.cell(i, j - 1, k)]) / g.hy
                    };
                    out.v[g.vf(i, j, k)] += val;
                }
            }
        }
        avg_to_v(&d_cells(g, &s.yz, Axis::Z), &mut out.v);
    }

    // w-component: d/dx xz + d/dy yz + d/dz zz
    {
        avg_to_w(&d_cells(g, &s.xz, Axis::X), &mut out.w);
        avg_to_w(&d_cells(g, &s.yz, Axis::Y), &mut out.w);
        for k in 0..=sp.nz {
            for j in 0..sp.ny {
                for i in 0..sp.nx {
                    let val = if k == 0 {
                        (-2.0 * s.zz[g.cell(i, j, 0)] + 3.0 * s.zz[g.cell(i, j, 1)]
                            - s.zz[g.cell(i, j, 2)])
                            / g.hz
                    } else if k == sp.nz {
                        (2.0 * s.zz[g.cell(i, j, sp.nz - 1)] - 3.0 * s.zz[g.cell(i, j, sp.nz - 2)]
                            + s.zz[g.cell(i, j, sp.nz - 3)])
                            / g.hz
                    } else {
                        (s.zz[g.cell(i, j, k)] - s.zz[g.cell(i, j, k - 1)]) / g.hz
                    };
                    out.w[g.wf(i, j, k)] += val;
                }
            }
        }
    }

    out
}

/// Averages a cell-centered vector (three cell arrays) onto the velocity
/// faces, extrapolating at the boundary faces.
pub fn cells_to_faces(grid: &Arc<StaggeredGrid>, cells: &[Vec<f64>; 3]) -> VectorField {
    let g = grid;
    let sp = g.spec;
    let mut out = VectorField::zeros(grid);
    for k in 0..sp.nz {
        for j in 0..sp.ny {
            for i in 0..=sp.nx {
                out.u[g.uf(i, j, k)] = if i == 0 {
                    1.5 * cells[0][g.cell(0, j, k)] - 0.5 * cells[0][g.cell(1, j, k)]
                } else if i == sp.nx {
                    1.5 * cells[0][g.cell(sp.nx - 1, j, k)]
                        - 0.5 * cells[0][g.cell(sp.nx - 2, j, k)]
                } else {
                    0.5 * (cells[0][g.cell(i - 1, j, k)] + cells[0][g.cell(i, j, k)])
                };
            }
        }
    }
    for k in 0..sp.nz {
        for j in 0..=sp.ny {
            for i in 0..sp.nx {
                out.v[g.vf(i, j, k)] = if j == 0 {
                    1.5 * cells[1][g.cell(i, 0, k)] - 0.5 * cells[1][g.cell(i, 1, k)]
                } else if j == sp.ny {
                    1.5 * cells[1][g.cell(i, sp.ny - 1, k)]
                        - 0.5 * cells[1][g.cell(i, sp.ny - 2, k)]
                } else {
                    0.5 * (cells[1][g.cell(i, j - 1, k)] + cells[1][g.cell(i, j, k)])
                };
            }
        }
    }
    for k in 0..=sp.nz {
        for j in 0..sp.ny {
            for i in 0..sp.nx {
                out.w[g.wf(i, j, k)] = if k == 0 {
                    1.5 * cells[2][g.cell(i, j, 0)] - 0.5 * cells[2][g.cell(i, j, 1)]
                } else if k == sp.nz {
                    1.5 * cells[2][g.cell(i, j, sp.nz - 1)]
                        - 0.5 * cells[2][g.cell(i, j, sp.nz - 2)]
                } else {
                    0.5 * (cells[2][g.cell(i, j, k - 1)] + cells[2][g.cell(i, j, k)])
                };
            }
        }
    }
    out
}

/// Shape-checked divergence, the public error-reporting entry point.
pub fn div_checked(field: &VectorField, grid: &StaggeredGrid) -> Result<ScalarField> {
    field.check_same_grid(grid)?;
    Ok(divergence(field))
}
