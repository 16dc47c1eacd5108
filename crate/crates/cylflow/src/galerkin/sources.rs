//! Momentum source and boundary tractions induced by the lift.
//!
//! `F = f - delta_t - delta.grad(delta) + nu Div D(delta)` as a pointwise
//! face field, and the tangential traction data
//! `B_1a = -nu n.D(delta).tau_a - gamma delta.tau_a` on the lateral wall,
//! `B_2a = -n.D(delta).tau_a` on the end faces.
//!
//! The evolution path evaluates the lift contributions through the assembled
//! bilinear forms (the integrated-by-parts representation); these fields are
//! the pointwise representation of the same terms and the two routes are
//! checked against each other in the tests.

use crate::domain::field::VectorField;
use crate::domain::grid::Patch;
use crate::domain::ops::{
    cells_to_faces, divergence_of_tensor, tangential_samples, traction_samples,
};
use crate::error::Result;
use crate::galerkin::forms::{convective_cells, strain_of};
use crate::hopf::LiftFields;

/// Assembled sources at one instant.
#[derive(Debug, Clone)]
pub struct SourceTerms {
    /// External forcing, face-sampled.
    pub f: VectorField,
    /// Combined momentum source `F`.
    pub big_f: VectorField,
    /// Lateral-wall tractions per patch, two tangent components each.
    pub b1: Vec<(Patch, [Vec<f64>; 2])>,
    /// End-face tractions per patch.
    pub b2: Vec<(Patch, [Vec<f64>; 2])>,
}

/// Evaluates the sources for the current lift and forcing sample.
pub fn assemble_sources(
    lift: &LiftFields,
    f: &VectorField,
    nu: f64,
    gamma: f64,
) -> Result<SourceTerms> {
    let grid = lift.delta.grid.clone();
    f.check_same_grid(&grid)?;
    lift.delta_t.check_same_grid(&grid)?;

    let delta = &lift.delta;
    let strain_delta = strain_of(delta);

    // F = f - delta_t - delta.grad(delta) + nu Div D(delta)
    let mut big_f = f.clone();
    big_f.axpy(-1.0, &lift.delta_t);
    let conv = convective_cells(delta, delta);
    big_f.axpy(-1.0, &cells_to_faces(&grid, &conv));
    let mut visc = divergence_of_tensor(&strain_delta);
    visc.scale(nu);
    big_f.axpy(1.0, &visc);

    let mut b1 = Vec::new();
    for patch in Patch::S1 {
        let traction = traction_samples(&strain_delta, patch);
        let tangent = tangential_samples(delta, patch);
        let mut vals = [vec![0.0; traction[0].len()], vec![0.0; traction[1].len()]];
        for alpha in 0..2 {
            for (out, (tr, tg)) in vals[alpha]
                .iter_mut()
                .zip(traction[alpha].iter().zip(&tangent[alpha]))
            {
                *out = -nu * tr - gamma * tg;
            }
        }
        b1.push((patch, vals));
    }

    let mut b2 = Vec::new();
    for patch in [Patch::S2Lo, Patch::S2Hi] {
        let traction = traction_samples(&strain_delta, patch);
        let vals = [
            traction[0].iter().map(|v| -v).collect::<Vec<f64>>(),
            traction[1].iter().map(|v| -v).collect::<Vec<f64>>(),
        ];
        b2.push((patch, vals));
    }

    Ok(SourceTerms {
        f: f.clone(),
        big_f,
        b1,
        b2,
    })
}
