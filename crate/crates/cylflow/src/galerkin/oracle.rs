//! Independent cross-validation stepper: a pressure-projection scheme for
//! the original velocity, imposing the slip and inflow/outflow conditions
//! directly, with no boundary-data lift.
//!
//! It shares the spatial operators with the Galerkin engine but none of the
//! lift machinery, so agreement between the two certifies the cutoff,
//! potential correction, basis span and reconstruction together.

use crate::domain::field::VectorField;
use crate::domain::grid::StaggeredGrid;
use crate::domain::ops::{divergence, gradient};
use crate::domain::quad::norm_l2_mass;
use crate::error::{Error, Result};
use crate::galerkin::provider::{FluxProvider, ForcingProvider, LiftSample};
use crate::galerkin::stepper::{momentum_rate, EvolveParams};
use crate::hopf::BoundaryFlux;
use crate::poisson::solve_neumann;

/// Writes the prescribed normal data into the boundary DOF slots:
/// `v3 = d1` at the bottom face, `v3 = d2` at the top, impermeable side wall.
pub fn impose_boundary_data(v: &mut VectorField, flux: &BoundaryFlux) {
    let g = v.grid.clone();
    let s = g.spec;
    for k in 0..s.nz {
        for j in 0..s.ny {
            v.u[g.uf(0, j, k)] = 0.0;
            v.u[g.uf(s.nx, j, k)] = 0.0;
        }
    }
    for k in 0..s.nz {
        for i in 0..s.nx {
            v.v[g.vf(i, 0, k)] = 0.0;
            v.v[g.vf(i, s.ny, k)] = 0.0;
        }
    }
    for j in 0..s.ny {
        for i in 0..s.nx {
            v.w[g.wf(i, j, 0)] = flux.d1.at(i, j);
            v.w[g.wf(i, j, s.nz)] = flux.d2.at(i, j);
        }
    }
}

/// Pressure projection that respects the boundary data: the correction
/// `grad q` vanishes on the boundary-normal faces, so the imposed inflow and
/// outflow survive and the interior becomes divergence-free.
pub fn project_with_data(v: &mut VectorField, tol: f64) -> Result<()> {
    let grid = v.grid.clone();
    let div = divergence(v);
    let (q, _) = solve_neumann(&div, &grid, tol)?;
    v.axpy(-1.0, &gradient(&q));
    Ok(())
}

fn check_desk_scale(grid: &StaggeredGrid) -> Result<()> {
    let s = grid.spec;
    if s.nx > 8 || s.ny > 8 || s.nz > 16 {
        return Err(Error::Parameter(format!(
            "the cross-validation stepper is restricted to desk grids (at most 8x8x16), got {}x{}x{}",
            s.nx, s.ny, s.nz
        )));
    }
    Ok(())
}

/// Initial oracle state: data imposed, then projected.
pub fn oracle_init(mut v: VectorField, flux: &BoundaryFlux, tol: f64) -> Result<VectorField> {
    check_desk_scale(&v.grid)?;
    impose_boundary_data(&mut v, flux);
    project_with_data(&mut v, tol)?;
    Ok(v)
}

/// One explicit midpoint step of the projection scheme on the full velocity.
pub fn oracle_step(
    v: &VectorField,
    dt: f64,
    t: f64,
    flux: &dyn FluxProvider,
    forcing: &dyn ForcingProvider,
    params: &EvolveParams,
) -> Result<VectorField> {
    check_desk_scale(&v.grid)?;
    if !(dt > 0.0) {
        return Err(Error::Parameter(format!(
            "time step must be positive, got {dt}"
        )));
    }
    let grid = v.grid.clone();
    let no_lift = LiftSample {
        delta: VectorField::zeros(&grid),
        delta_t: VectorField::zeros(&grid),
    };

    let f0 = forcing.sample(t);
    let g1 = momentum_rate(v, &no_lift, &f0, params);
    let mut v_mid = v.clone();
    v_mid.axpy(0.5 * dt, &g1);
    impose_boundary_data(&mut v_mid, &flux.flux_at(t + 0.5 * dt));
    project_with_data(&mut v_mid, params.poisson_tol)?;

    let f1 = forcing.sample(t + 0.5 * dt);
    let g2 = momentum_rate(&v_mid, &no_lift, &f1, params);
    let mut v_new = v.clone();
    v_new.axpy(dt, &g2);
    impose_boundary_data(&mut v_new, &flux.flux_at(t + dt));
    project_with_data(&mut v_new, params.poisson_tol)?;

    let before = norm_l2_mass(v);
    let after = norm_l2_mass(&v_new);
    if !after.is_finite() || (before > 1e-12 && after > 10.0 * before) {
        return Err(Error::BlowUp {
            t,
            from: before,
            to: after,
        });
    }
    Ok(v_new)
}
