//! The bilinear and trilinear forms of the weak formulation, each paired
//! with its exact algebraic adjoint so the evolution operators and the
//! assembled forms cannot drift apart.
//!
//! Dissipation: `nu/2 (D(u), D(a))` over cells plus the slip friction
//! `gamma sum_alpha (u.tau_alpha, a.tau_alpha)` over the lateral patches.
//! Transport: the skew-symmetrized convective form
//! `1/2 [(u.grad v, a) - (u.grad a, v)]`, which vanishes exactly when
//! `v = a` and so keeps the discrete energy ledger faithful.

use std::sync::Arc;

use crate::domain::field::VectorField;
use crate::domain::grid::{Patch, StaggeredGrid};
use crate::domain::ops::{
    collocate, collocate_transpose, d_cells, d_cells_transpose, strain, strain_transpose,
    tangential_samples, tangential_samples_transpose, Axis, StrainField,
};

/// Plain component dot of two face fields (no mass weights).
pub fn dot_plain(a: &VectorField, b: &VectorField) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.u.iter().zip(&b.u) {
        acc += x * y;
    }
    for (x, y) in a.v.iter().zip(&b.v) {
        acc += x * y;
    }
    for (x, y) in a.w.iter().zip(&b.w) {
        acc += x * y;
    }
    acc
}

/// `(D(u), D(a))` over the cells, with volume weights and off-diagonal
/// multiplicity two.
pub fn strain_form(u: &VectorField, a: &VectorField) -> f64 {
    let du = strain(u);
    let da = strain(a);
    let vol = u.grid.cell_volume();
    let mut acc = 0.0;
    for c in 0..u.grid.n_cells() {
        acc += vol * du.contract_at(&da, c);
    }
    acc
}

/// Slip form `sum_alpha (u.tau_alpha, a.tau_alpha)_{S1}`.
pub fn slip_form(u: &VectorField, a: &VectorField) -> f64 {
    let g = &u.grid;
    let mut acc = 0.0;
    for patch in Patch::S1 {
        let area = g.patch_panel_area(patch);
        let su = tangential_samples(u, patch);
        let sa = tangential_samples(a, patch);
        for alpha in 0..2 {
            for (x, y) in su[alpha].iter().zip(&sa[alpha]) {
                acc += area * x * y;
            }
        }
    }
    acc
}

/// Covector of the dissipation form: `K u` with
/// `dot_plain(K u, a) = nu/2 strain_form(u, a) + gamma slip_form(u, a)`.
pub fn dissipation_apply(u: &VectorField, nu: f64, gamma: f64) -> VectorField {
    let grid = u.grid.clone();
    let vol = grid.cell_volume();
    let mut s = strain(u);
    let half_nu_vol = 0.5 * nu * vol;
    for c in 0..grid.n_cells() {
        s.xx[c] *= half_nu_vol;
        s.yy[c] *= half_nu_vol;
        s.zz[c] *= half_nu_vol;
        // Off-diagonal multiplicity two.
        s.xy[c] *= 2.0 * half_nu_vol;
        s.xz[c] *= 2.0 * half_nu_vol;
        s.yz[c] *= 2.0 * half_nu_vol;
    }
    let mut out = strain_transpose(&grid, &s);

    for patch in Patch::S1 {
        let area = grid.patch_panel_area(patch);
        let mut samples = tangential_samples(u, patch);
        for alpha in 0..2 {
            for v in &mut samples[alpha] {
                *v *= gamma * area;
            }
        }
        let back = tangential_samples_transpose(&grid, &samples, patch);
        out.axpy(1.0, &back);
    }
    out
}

/// Cell-centered gradient of every collocated component: `grads[j][d]` is
/// `d v_j / d x_d`.
fn component_gradients(grid: &StaggeredGrid, comps: &[Vec<f64>; 3]) -> [[Vec<f64>; 3]; 3] {
    let gr = |c: &Vec<f64>| {
        [
            d_cells(grid, c, Axis::X),
            d_cells(grid, c, Axis::Y),
            d_cells(grid, c, Axis::Z),
        ]
    };
    [gr(&comps[0]), gr(&comps[1]), gr(&comps[2])]
}

/// Skew-symmetrized convective form `1/2 [(carrier.grad v, a) - (carrier.grad a, v)]`
/// with every factor collocated at cell centers.
pub fn trilinear_skew(carrier: &VectorField, v: &VectorField, a: &VectorField) -> f64 {
    let grid = &carrier.grid;
    let vol = grid.cell_volume();
    let uc = collocate(carrier);
    let vc = collocate(v);
    let ac = collocate(a);
    let gv = component_gradients(grid, &vc);
    let ga = component_gradients(grid, &ac);
    let n = grid.n_cells();
    let mut term1 = 0.0;
    let mut term2 = 0.0;
    for c in 0..n {
        for j in 0..3 {
            let adv_v = uc[0][c] * gv[j][0][c] + uc[1][c] * gv[j][1][c] + uc[2][c] * gv[j][2][c];
            let adv_a = uc[0][c] * ga[j][0][c] + uc[1][c] * ga[j][1][c] + uc[2][c] * ga[j][2][c];
            term1 += adv_v * ac[j][c];
            term2 += adv_a * vc[j][c];
        }
    }
    0.5 * vol * (term1 - term2)
}

/// Covector of the convective form in its test-function slot:
/// `dot_plain(advect_apply(carrier, v), a) = trilinear_skew(carrier, v, a)`.
pub fn advect_apply(carrier: &VectorField, v: &VectorField) -> VectorField {
    let grid: Arc<StaggeredGrid> = carrier.grid.clone();
    let vol = grid.cell_volume();
    let uc = collocate(carrier);
    let vc = collocate(v);
    let gv = component_gradients(&grid, &vc);
    let n = grid.n_cells();
    let mut out = VectorField::zeros(&grid);

    for j in 0..3 {
        // +1/2 (carrier.grad v_j, a_j): scatter the cell product through the
        // collocation adjoint.
        let mut cells = vec![0.0; n];
        for c in 0..n {
            cells[c] = 0.5
                * vol
                * (uc[0][c] * gv[j][0][c] + uc[1][c] * gv[j][1][c] + uc[2][c] * gv[j][2][c]);
        }
        out.axpy(1.0, &collocate_transpose(&grid, &cells, j));

        // -1/2 (carrier.grad a_j, v_j): adjoint through the cell derivative.
        let mut acc = vec![0.0; n];
        for (d, axis) in [(0, Axis::X), (1, Axis::Y), (2, Axis::Z)] {
            let mut s = vec![0.0; n];
            for c in 0..n {
                s[c] = -0.5 * vol * uc[d][c] * vc[j][c];
            }
            let t = d_cells_transpose(&grid, &s, axis);
            for c in 0..n {
                acc[c] += t[c];
            }
        }
        out.axpy(1.0, &collocate_transpose(&grid, &acc, j));
    }
    out
}

/// Dissipation form value, the covector route; used for ledger cross-checks.
pub fn dissipation_form(u: &VectorField, a: &VectorField, nu: f64, gamma: f64) -> f64 {
    0.5 * nu * strain_form(u, a) + gamma * slip_form(u, a)
}

/// Paper-style strain energy `(D(u), D(u))` of a single field.
pub fn strain_energy(u: &VectorField) -> f64 {
    strain_form(u, u)
}

/// Squared tangential trace on the whole lateral wall,
/// `sum_alpha ||u.tau_alpha||^2_{L2(S1)}`.
pub fn slip_energy(u: &VectorField) -> f64 {
    slip_form(u, u)
}

/// Traction pairing `sum_alpha (values_alpha, a.tau_alpha)_patch` for
/// boundary source terms.
pub fn traction_pairing(values: &[Vec<f64>; 2], a: &VectorField, patch: Patch) -> f64 {
    let area = a.grid.patch_panel_area(patch);
    let sa = tangential_samples(a, patch);
    let mut acc = 0.0;
    for alpha in 0..2 {
        for (x, y) in values[alpha].iter().zip(&sa[alpha]) {
            acc += area * x * y;
        }
    }
    acc
}

/// Covector of [`traction_pairing`] in the test-function slot.
pub fn traction_pairing_apply(
    grid: &Arc<StaggeredGrid>,
    values: &[Vec<f64>; 2],
    patch: Patch,
) -> VectorField {
    let area = grid.patch_panel_area(patch);
    let scaled = [
        values[0].iter().map(|v| v * area).collect::<Vec<f64>>(),
        values[1].iter().map(|v| v * area).collect::<Vec<f64>>(),
    ];
    tangential_samples_transpose(grid, &scaled, patch)
}

/// Cell field of the convective derivative `(carrier.grad) v`, one array per
/// component; used when the momentum source is assembled pointwise.
pub fn convective_cells(carrier: &VectorField, v: &VectorField) -> [Vec<f64>; 3] {
    let grid = &carrier.grid;
    let uc = collocate(carrier);
    let vc = collocate(v);
    let gv = component_gradients(grid, &vc);
    let n = grid.n_cells();
    let mut out = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for j in 0..3 {
        for c in 0..n {
            out[j][c] = uc[0][c] * gv[j][0][c] + uc[1][c] * gv[j][1][c] + uc[2][c] * gv[j][2][c];
        }
    }
    out
}

/// Strain field of a velocity, re-exported for the source assembly.
pub fn strain_of(v: &VectorField) -> StrainField {
    strain(v)
}
