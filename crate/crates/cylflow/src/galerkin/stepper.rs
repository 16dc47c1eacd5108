//! Time evolution of the homogenized unknown.
//!
//! Two equivalent engines share the same spatial forms:
//!
//! * the coefficient engine advances the Galerkin coefficients on an explicit
//!   orthonormal divergence-free basis;
//! * the projection engine advances the face field directly and re-projects
//!   onto the divergence-free space through the Neumann solve after every
//!   stage.
//!
//! The face gradient of a cell potential is mass-orthogonal to every
//! discretely divergence-free tangential field, so on the full basis the two
//! engines integrate the same coefficient ODE; this is also what makes the
//! projection oracle a meaningful cross-check of the basis route.
//!
//! Stepping is explicit second-order Runge-Kutta (midpoint), deterministic,
//! with a blow-up detector.

use std::sync::Arc;

use crate::domain::field::VectorField;
use crate::domain::grid::StaggeredGrid;
use crate::domain::ops::{divergence, gradient};
use crate::domain::quad::{apply_inverse_mass, apply_mass, norm_l2_mass};
use crate::error::{Error, Result};
use crate::galerkin::basis::GalerkinBasis;
use crate::galerkin::forms::{advect_apply, dissipation_apply};
use crate::galerkin::provider::{ForcingProvider, LiftProvider, LiftSample};
use crate::poisson::solve_neumann;

/// Fixed evolution parameters.
#[derive(Debug, Clone, Copy)]
pub struct EvolveParams {
    pub nu: f64,
    pub gamma: f64,
    /// Test hook: switches the convective form off (Stokes limit).
    pub transport_on: bool,
    /// Tolerance of the projection solves.
    pub poisson_tol: f64,
}

impl EvolveParams {
    pub fn new(nu: f64, gamma: f64) -> Self {
        EvolveParams {
            nu,
            gamma,
            transport_on: true,
            poisson_tol: 1e-10,
        }
    }
}

/// Reported stability bound `min(h^2/(6 nu), h/|v|_inf)` with `h` the
/// smallest cell size.
pub fn stability_bound(grid: &StaggeredGrid, nu: f64, v_inf: f64) -> f64 {
    let h = grid.hx.min(grid.hy).min(grid.hz);
    let viscous = h * h / (6.0 * nu);
    if v_inf > 0.0 {
        viscous.min(h / v_inf)
    } else {
        viscous
    }
}

/// Mass-weighted covector of the momentum balance at the current state:
/// `M f - M delta_t - [K_visc + K_adv](w + delta)`, ready to be dotted with
/// test fields.
fn momentum_covector(
    w: &VectorField,
    lift: &LiftSample,
    f: &VectorField,
    params: &EvolveParams,
) -> VectorField {
    let v = w.add(&lift.delta);
    let mut cov = dissipation_apply(&v, params.nu, params.gamma);
    if params.transport_on {
        cov.axpy(1.0, &advect_apply(&v, &v));
    }
    let mut rhs = f.sub(&lift.delta_t);
    apply_mass(&mut rhs);
    rhs.axpy(-1.0, &cov);
    rhs
}

/// Momentum rate as a face field, `M^{-1}` applied to the covector.
pub fn momentum_rate(
    w: &VectorField,
    lift: &LiftSample,
    f: &VectorField,
    params: &EvolveParams,
) -> VectorField {
    let mut cov = momentum_covector(w, lift, f, params);
    apply_inverse_mass(&mut cov);
    cov
}

// ---------------------------------------------------------------------------
// Coefficient (Galerkin) engine
// ---------------------------------------------------------------------------

/// Galerkin state: time, coefficient vector and the cached field.
#[derive(Debug, Clone)]
pub struct GalerkinState {
    pub t: f64,
    pub coeffs: Vec<f64>,
    pub w: VectorField,
}

impl GalerkinState {
    pub fn new(basis: &GalerkinBasis, coeffs: Vec<f64>, t: f64) -> Self {
        let w = basis.synthesize(&coeffs);
        GalerkinState { t, coeffs, w }
    }

    /// `||w||^2_{L2}` from the coefficients (orthonormal basis).
    pub fn l2_sq_from_coeffs(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// Initial coefficients: mass inner products of the initial field with the
/// basis.
pub fn project_initial(w0: &VectorField, basis: &GalerkinBasis) -> Vec<f64> {
    basis.dot_mass_all(w0)
}

/// Coefficient derivative of the Galerkin system at the given state.
pub fn rhs_ode(
    state: &GalerkinState,
    basis: &GalerkinBasis,
    lift: &LiftSample,
    f: &VectorField,
    params: &EvolveParams,
) -> Vec<f64> {
    let cov = momentum_covector(&state.w, lift, f, params);
    basis.dot_plain_all(&cov)
}

fn detect_blowup(t: f64, before: f64, after: f64) -> Result<()> {
    // Growth from a (near-)zero state is source-driven and legitimate; a
    // genuine instability trips the ratio on the following step or goes
    // non-finite outright.
    if !after.is_finite() || (before > 1e-12 && after > 10.0 * before) {
        return Err(Error::BlowUp {
            t,
            from: before,
            to: after,
        });
    }
    Ok(())
}

/// One explicit midpoint step of the coefficient system.
pub fn step(
    state: &GalerkinState,
    dt: f64,
    basis: &GalerkinBasis,
    lift: &dyn LiftProvider,
    forcing: &dyn ForcingProvider,
    params: &EvolveParams,
) -> Result<GalerkinState> {
    if !(dt > 0.0) {
        return Err(Error::Parameter(format!(
            "time step must be positive, got {dt}"
        )));
    }
    let t = state.t;
    let l0 = lift.sample(t);
    let f0 = forcing.sample(t);
    let k1 = rhs_ode(state, basis, &l0, &f0, params);

    let mut c_mid = state.coeffs.clone();
    for (c, k) in c_mid.iter_mut().zip(&k1) {
        *c += 0.5 * dt * k;
    }
    let mid = GalerkinState::new(basis, c_mid, t + 0.5 * dt);
    let l1 = lift.sample(t + 0.5 * dt);
    let f1 = forcing.sample(t + 0.5 * dt);
    let k2 = rhs_ode(&mid, basis, &l1, &f1, params);

    let mut c_new = state.coeffs.clone();
    for (c, k) in c_new.iter_mut().zip(&k2) {
        *c += dt * k;
    }
    let norm_before = state.l2_sq_from_coeffs().sqrt();
    let norm_after = c_new.iter().map(|c| c * c).sum::<f64>().sqrt();
    detect_blowup(t, norm_before, norm_after)?;

    Ok(GalerkinState::new(basis, c_new, t + dt))
}

/// Recovers the physical velocity `v = w + delta`.
pub fn reconstruct_v(state_w: &VectorField, lift: &LiftSample) -> VectorField {
    state_w.add(&lift.delta)
}

// ---------------------------------------------------------------------------
// Projection engine (full-space representation of the same dynamics)
// ---------------------------------------------------------------------------

/// Face-field state of the homogenized unknown.
#[derive(Debug, Clone)]
pub struct ProjectionState {
    pub t: f64,
    pub w: VectorField,
}

/// Mass-orthogonal projection onto the divergence-free tangential space:
/// zero the boundary-normal slots, then subtract the potential gradient.
pub fn project_div_free(w: &mut VectorField, tol: f64) -> Result<()> {
    w.clear_boundary_normals();
    let grid: Arc<StaggeredGrid> = w.grid.clone();
    let div = divergence(w);
    let (q, _) = solve_neumann(&div, &grid, tol)?;
    w.axpy(-1.0, &gradient(&q));
    Ok(())
}

/// One explicit midpoint step of the projection engine, projecting after
/// every stage so each stage state is divergence-free.
pub fn projection_step(
    state: &ProjectionState,
    dt: f64,
    lift: &dyn LiftProvider,
    forcing: &dyn ForcingProvider,
    params: &EvolveParams,
) -> Result<ProjectionState> {
    if !(dt > 0.0) {
        return Err(Error::Parameter(format!(
            "time step must be positive, got {dt}"
        )));
    }
    let t = state.t;
    let l0 = lift.sample(t);
    let f0 = forcing.sample(t);
    let g1 = momentum_rate(&state.w, &l0, &f0, params);
    let mut w_mid = state.w.clone();
    w_mid.axpy(0.5 * dt, &g1);
    project_div_free(&mut w_mid, params.poisson_tol)?;

    let l1 = lift.sample(t + 0.5 * dt);
    let f1 = forcing.sample(t + 0.5 * dt);
    let g2 = momentum_rate(&w_mid, &l1, &f1, params);
    let mut w_new = state.w.clone();
    w_new.axpy(dt, &g2);
    project_div_free(&mut w_new, params.poisson_tol)?;

    let before = norm_l2_mass(&state.w);
    let after = norm_l2_mass(&w_new);
    detect_blowup(t, before, after)?;

    Ok(ProjectionState {
        t: t + dt,
        w: w_new,
    })
}

/// Semi-discrete energy-identity residual at a state with no data:
/// `d/dt ||w||^2 + nu (D(w), D(w)) + 2 gamma sum ||w.tau||^2`, which the
/// skew transport makes zero up to rounding.
pub fn energy_identity_residual(
    w: &VectorField,
    lift: &LiftSample,
    f: &VectorField,
    params: &EvolveParams,
) -> f64 {
    let cov = momentum_covector(w, lift, f, params);
    let ddt_l2_sq = 2.0 * crate::galerkin::forms::dot_plain(&cov, w);
    let dissipation = params.nu * crate::galerkin::forms::strain_energy(w)
        + 2.0 * params.gamma * crate::galerkin::forms::slip_energy(w);
    ddt_l2_sq + dissipation
}
