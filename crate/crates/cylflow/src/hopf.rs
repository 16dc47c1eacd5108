//! Boundary-data lift: the logarithmic cutoff, the constant extension of the
//! flux profiles, the vertical carrier field b, the cutoff parameter rule,
//! and the solenoidal lift delta = b + grad(phi).

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::domain::field::{FaceProfile, ScalarField, VectorField};
use crate::domain::grid::{Patch, StaggeredGrid};
use crate::domain::ops::{divergence, gradient};
use crate::domain::quad::{integrate_surface, integrate_volume};
use crate::error::{Error, Result};
use crate::poisson::{solve_neumann, NeumannSolveReport};

/// Smallest cutoff slope; below this the plateau radius underflows anyway
/// and the profile degenerates gracefully.
pub const EPS_FLOOR: f64 = 1e-8;

/// Parameters of the logarithmic cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfParams {
    /// Slope parameter of the logarithmic branch.
    pub eps: f64,
    /// Support depth of the cutoff, measured from each end face.
    pub rho: f64,
    /// Plateau depth `rho * exp(-1/eps)`.
    pub r: f64,
    /// Set when the raw support depth was clamped to a/2.
    pub clamped: bool,
}

impl HopfParams {
    pub fn new(eps: f64, rho: f64) -> Self {
        let eps = eps.max(EPS_FLOOR);
        HopfParams {
            eps,
            rho,
            r: rho * (-1.0 / eps).exp(),
            clamped: false,
        }
    }

    pub fn validate(&self, a: f64) -> Result<()> {
        if !(self.eps > 0.0 && self.rho > 0.0) {
            return Err(Error::Parameter(format!(
                "cutoff parameters must be positive: eps={}, rho={}",
                self.eps, self.rho
            )));
        }
        if self.rho > 0.5 * a + 1e-15 {
            return Err(Error::Parameter(format!(
                "cutoff support depth rho={} overlaps from both ends (a/2 = {})",
                self.rho,
                0.5 * a
            )));
        }
        let r = self.rho * (-1.0 / self.eps).exp();
        if (self.r - r).abs() > 1e-15 * self.rho.max(1.0) {
            return Err(Error::Parameter(
                "plateau depth r is not rho*exp(-1/eps)".into(),
            ));
        }
        Ok(())
    }
}

/// Cutoff profile: 1 on the plateau, `-eps ln(sigma/rho)` on the logarithmic
/// branch, 0 outside the support. Continuous in sigma.
pub fn eta(sigma: f64, params: &HopfParams) -> Result<f64> {
    if sigma < 0.0 {
        return Err(Error::Domain(format!(
            "cutoff argument must be nonnegative, got {sigma}"
        )));
    }
    Ok(if sigma <= params.r {
        1.0
    } else if sigma <= params.rho {
        -params.eps * (sigma / params.rho).ln()
    } else {
        0.0
    })
}

/// Derivative of the cutoff: 0 off the logarithmic branch, `-eps/sigma` on it.
pub fn eta_prime(sigma: f64, params: &HopfParams) -> Result<f64> {
    if sigma < 0.0 {
        return Err(Error::Domain(format!(
            "cutoff argument must be nonnegative, got {sigma}"
        )));
    }
    Ok(if sigma <= params.r || sigma > params.rho {
        0.0
    } else {
        -params.eps / sigma
    })
}

/// Parameter rule from the viscosity and the extension norm:
/// `eps = nu / (15 ||d~||)`, `rho = (nu / (15 ||d~||))^6`, the support depth
/// clamped to a/2 so the two cutoffs never overlap.
pub fn select_params(nu: f64, dtil_norm: f64, a: f64) -> Result<HopfParams> {
    if dtil_norm < 0.0 || !dtil_norm.is_finite() {
        return Err(Error::Parameter(format!(
            "extension norm must be finite and nonnegative, got {dtil_norm}"
        )));
    }
    if dtil_norm == 0.0 {
        // Degenerate zero-flux case: the carrier field is identically zero,
        // any valid support works.
        return Ok(HopfParams::new(EPS_FLOOR.max(0.5), 0.25 * a));
    }
    let eps = (nu / (15.0 * dtil_norm)).max(EPS_FLOOR);
    let rho_raw = (nu / (15.0 * dtil_norm)).powi(6);
    let (rho, clamped) = if rho_raw > 0.5 * a {
        (0.5 * a, true)
    } else {
        (rho_raw, false)
    };
    let mut p = HopfParams::new(eps, rho);
    p.clamped = clamped;
    Ok(p)
}

/// Inflow/outflow profiles at one instant: values and time derivatives on
/// both end faces.
#[derive(Debug, Clone)]
pub struct BoundaryFlux {
    /// Inflow profile on S2(-a).
    pub d1: FaceProfile,
    /// Outflow profile on S2(a).
    pub d2: FaceProfile,
    /// Time derivatives of the profiles.
    pub d1_t: FaceProfile,
    pub d2_t: FaceProfile,
}

impl BoundaryFlux {
    pub fn zeros(grid: &StaggeredGrid) -> Self {
        BoundaryFlux {
            d1: FaceProfile::zeros(grid),
            d2: FaceProfile::zeros(grid),
            d1_t: FaceProfile::zeros(grid),
            d2_t: FaceProfile::zeros(grid),
        }
    }

    pub fn validate(&self, grid: &StaggeredGrid) -> Result<()> {
        let n = grid.spec.nx * grid.spec.ny;
        for (name, prof) in [("d1", &self.d1), ("d2", &self.d2)] {
            if prof.data.len() != n {
                return Err(Error::Shape(format!(
                    "flux profile {name} has wrong panel count"
                )));
            }
            if prof.data.iter().any(|v| !v.is_finite()) {
                return Err(Error::Data(format!(
                    "non-finite value in flux profile {name}"
                )));
            }
            if prof.data.iter().any(|v| *v < -1e-12) {
                return Err(Error::Validation(format!(
                    "flux profile {name} must be nonnegative"
                )));
            }
        }
        Ok(())
    }

    /// Net inflow through S2(-a).
    pub fn inflow_integral(&self, grid: &StaggeredGrid) -> f64 {
        integrate_surface(&self.d1.data, grid, Patch::S2Lo).unwrap_or(0.0)
    }

    /// Net outflow through S2(a).
    pub fn outflow_integral(&self, grid: &StaggeredGrid) -> f64 {
        integrate_surface(&self.d2.data, grid, Patch::S2Hi).unwrap_or(0.0)
    }
}

/// Compatibility report for a sequence of flux samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tol: f64,
    pub ok: bool,
}

/// Reports `|int d1 - int d2|` per time sample and flags any excess over
/// `tol`. Reporting only; downstream constructors reject incompatible flux.
pub fn check_compatibility(
    samples: &[BoundaryFlux],
    grid: &StaggeredGrid,
    tol: f64,
) -> CompatibilityReport {
    let residuals: Vec<f64> = samples
        .iter()
        .map(|f| (f.inflow_integral(grid) - f.outflow_integral(grid)).abs())
        .collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    CompatibilityReport {
        ok: max_residual <= tol,
        residuals,
        max_residual,
        tol,
    }
}

/// Constant prolongation of the flux profiles into the cylinder:
/// `d~_i(x1,x2,x3) = d_i(x1,x2)`, so the x3-derivative vanishes identically.
pub fn extend_flux(flux: &BoundaryFlux, grid: &Arc<StaggeredGrid>) -> (ScalarField, ScalarField) {
    let s = grid.spec;
    let mut e1 = ScalarField::zeros(grid);
    let mut e2 = ScalarField::zeros(grid);
    for k in 0..s.nz {
        for j in 0..s.ny {
            for i in 0..s.nx {
                let c = grid.cell(i, j, k);
                e1.data[c] = flux.d1.at(i, j);
                e2.data[c] = flux.d2.at(i, j);
            }
        }
    }
    (e1, e2)
}

/// Vertical carrier field `b = (d~_1 eta(a + x3) + d~_2 eta(a - x3)) e3`.
///
/// The w-face at each end face has cutoff argument zero, so the normal trace
/// reproduces the flux profiles exactly.
pub fn build_b(
    flux: &BoundaryFlux,
    params: &HopfParams,
    grid: &Arc<StaggeredGrid>,
) -> Result<VectorField> {
    params.validate(grid.spec.a)?;
    flux.validate(grid)?;
    let s = grid.spec;
    let mut b = VectorField::zeros(grid);
    for k in 0..=s.nz {
        let z = -s.a + k as f64 * grid.hz;
        let eta1 = eta(s.a + z, params)?;
        let eta2 = eta(s.a - z, params)?;
        if eta1 == 0.0 && eta2 == 0.0 {
            continue;
        }
        for j in 0..s.ny {
            for i in 0..s.nx {
                b.w[grid.wf(i, j, k)] = flux.d1.at(i, j) * eta1 + flux.d2.at(i, j) * eta2;
            }
        }
    }
    Ok(b)
}

/// The assembled lift and its time derivative.
#[derive(Debug, Clone)]
pub struct LiftFields {
    /// Carrier field (only the third component is nonzero).
    pub b: VectorField,
    /// Potential from the Neumann correction.
    pub phi: ScalarField,
    /// Solenoidal lift `delta = b + grad(phi)`.
    pub delta: VectorField,
    /// Time derivative of the lift (the lift of the flux time derivative).
    pub delta_t: VectorField,
    /// Report of the potential solve.
    pub solve_report: NeumannSolveReport,
    /// Max normal-trace defect on S2 against the flux data.
    pub trace_defect_s2: f64,
    /// Max normal-trace magnitude on S1.
    pub trace_defect_s1: f64,
}

/// Assembles `delta = b + grad(phi)` and checks the traces. `phi` must solve
/// the Neumann problem for this `b`; a stale potential is rejected.
pub fn build_delta(
    b: &VectorField,
    phi: &ScalarField,
    flux: &BoundaryFlux,
    delta_t: VectorField,
    solve_report: NeumannSolveReport,
) -> Result<LiftFields> {
    let grid = b.grid.clone();
    phi.check_same_grid(&grid)?;
    let div_b = divergence(b);
    let lap_phi = divergence(&gradient(phi));
    let vol = grid.cell_volume();
    let mismatch: f64 = div_b
        .data
        .iter()
        .zip(&lap_phi.data)
        .map(|(a, b)| (a + b) * (a + b) * vol)
        .sum::<f64>()
        .sqrt();
    let scale = div_b
        .data
        .iter()
        .map(|v| v * v * vol)
        .sum::<f64>()
        .sqrt()
        .max(1e-30);
    if mismatch > 1e-6 * scale.max(1.0) {
        return Err(Error::Consistency(format!(
            "potential does not match the carrier field: |div b + lap phi| = {mismatch:e}"
        )));
    }

    let mut delta = b.clone();
    delta.axpy(1.0, &gradient(phi));

    let mut trace_defect_s2 = 0.0f64;
    for (patch, prof, sign) in [(Patch::S2Lo, &flux.d1, -1.0), (Patch::S2Hi, &flux.d2, 1.0)] {
        let tr = delta.normal_trace(patch);
        for (got, want) in tr.iter().zip(&prof.data) {
            // v.n = -d1 on S2(-a) and +d2 on S2(a).
            trace_defect_s2 = trace_defect_s2.max((got - sign * want).abs());
        }
    }
    let mut trace_defect_s1 = 0.0f64;
    for patch in Patch::S1 {
        for v in delta.normal_trace(patch) {
            trace_defect_s1 = trace_defect_s1.max(v.abs());
        }
    }

    Ok(LiftFields {
        b: b.clone(),
        phi: phi.clone(),
        delta,
        delta_t,
        solve_report,
        trace_defect_s2,
        trace_defect_s1,
    })
}

/// One-call lift construction for a flux sample: carrier field, Neumann
/// potential, lift, and the lift of the time-derivative profiles.
pub fn build_lift(
    flux: &BoundaryFlux,
    params: &HopfParams,
    grid: &Arc<StaggeredGrid>,
    tol: f64,
) -> Result<LiftFields> {
    let report = check_compatibility(std::slice::from_ref(flux), grid, compat_tol(grid));
    if !report.ok {
        return Err(Error::Validation(format!(
            "incompatible flux: |int d1 - int d2| = {:e}",
            report.max_residual
        )));
    }
    let b = build_b(flux, params, grid)?;
    let mut rhs = divergence(&b);
    rhs.scale(-1.0);
    let (phi, solve_report) = solve_neumann(&rhs, grid, tol)?;

    // The lift is linear in the data, so the time derivative of the lift is
    // the lift of the differentiated profiles.
    let flux_t = BoundaryFlux {
        d1: flux.d1_t.clone(),
        d2: flux.d2_t.clone(),
        d1_t: FaceProfile::zeros(grid),
        d2_t: FaceProfile::zeros(grid),
    };
    let delta_t =
        if flux_t.d1.data.iter().all(|v| *v == 0.0) && flux_t.d2.data.iter().all(|v| *v == 0.0) {
            VectorField::zeros(grid)
        } else {
            let bt = build_b_unchecked(&flux_t, params, grid)?;
            let mut rhs_t = divergence(&bt);
            rhs_t.scale(-1.0);
            let (phi_t, _) = solve_neumann(&rhs_t, grid, tol)?;
            let mut dt = bt;
            dt.axpy(1.0, &gradient(&phi_t));
            dt
        };

    build_delta(&b, &phi, flux, delta_t, solve_report)
}

/// Carrier field without the nonnegativity check (time derivatives may be
/// negative).
fn build_b_unchecked(
    flux: &BoundaryFlux,
    params: &HopfParams,
    grid: &Arc<StaggeredGrid>,
) -> Result<VectorField> {
    params.validate(grid.spec.a)?;
    let s = grid.spec;
    let mut b = VectorField::zeros(grid);
    for k in 0..=s.nz {
        let z = -s.a + k as f64 * grid.hz;
        let eta1 = eta(s.a + z, params)?;
        let eta2 = eta(s.a - z, params)?;
        if eta1 == 0.0 && eta2 == 0.0 {
            continue;
        }
        for j in 0..s.ny {
            for i in 0..s.nx {
                b.w[grid.wf(i, j, k)] = flux.d1.at(i, j) * eta1 + flux.d2.at(i, j) * eta2;
            }
        }
    }
    Ok(b)
}

/// Default compatibility tolerance, scaled with the end-face area.
pub fn compat_tol(grid: &StaggeredGrid) -> f64 {
    1e-10 * grid.patch_area(Patch::S2Hi).max(1.0)
}

/// Integral of `div b`; zero to quadrature precision whenever the flux is
/// compatible (discrete divergence theorem).
pub fn div_b_integral(b: &VectorField) -> f64 {
    integrate_volume(&divergence(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::grid::{build_grid, CylinderSpec};

    fn grid(n: (usize, usize, usize)) -> Arc<StaggeredGrid> {
        build_grid(CylinderSpec {
            a: 0.5,
            lx: 1.0,
            ly: 1.0,
            nx: n.0,
            ny: n.1,
            nz: n.2,
            nu: 1.0,
            gamma: 1.0,
        })
        .unwrap()
    }

    fn params(eps: f64, rho: f64) -> HopfParams {
        HopfParams::new(eps, rho)
    }

    #[test]
    fn eta_piecewise_values() {
        let p = params(0.5, 0.8);
        assert!((p.r - 0.8 * (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(eta(0.05, &p).unwrap(), 1.0);
        assert!(eta(0.8, &p).unwrap().abs() < 1e-15);
        // Continuity at the plateau edge: -eps ln(e^{-1/eps}) = 1.
        let at_r = eta(p.r, &p).unwrap();
        assert!((at_r - 1.0).abs() < 1e-12);
        let just_past = eta(p.r * (1.0 + 1e-9), &p).unwrap();
        assert!((just_past - 1.0).abs() < 1e-8);
        assert_eq!(eta(2.0, &p).unwrap(), 0.0);
        assert!(eta(-0.1, &p).is_err());
    }

    #[test]
    fn eta_prime_piecewise_values() {
        let p = params(0.5, 0.8);
        assert_eq!(eta_prime(0.05, &p).unwrap(), 0.0);
        assert!((eta_prime(0.4, &p).unwrap() - (-1.25)).abs() < 1e-14);
        assert_eq!(eta_prime(0.9, &p).unwrap(), 0.0);
        assert!(eta_prime(-1.0, &p).is_err());
    }

    #[test]
    fn eta_prime_bound_holds_everywhere() {
        let p = params(0.37, 0.21);
        for i in 1..=10_000 {
            let sigma = i as f64 * 1e-4 * 2.5;
            let ep = eta_prime(sigma, &p).unwrap().abs();
            assert!(ep <= p.eps / sigma + 1e-15);
        }
    }

    #[test]
    fn eta_is_monotone_nonincreasing() {
        let p = params(0.4, 0.2);
        let mut prev = f64::INFINITY;
        for i in 0..=2000 {
            let sigma = i as f64 * 2.0e-4;
            let v = eta(sigma, &p).unwrap();
            assert!(v <= prev + 1e-13);
            assert!((0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn select_params_arithmetic() {
        let p = select_params(0.15, 1.0, 0.5).unwrap();
        assert!((p.eps - 0.01).abs() < 1e-15);
        assert!((p.rho - 1e-12).abs() < 1e-24);
        assert!(!p.clamped);
    }

    #[test]
    fn select_params_clamps_large_support() {
        let p = select_params(15.0, 1.0, 0.5).unwrap();
        assert!(p.clamped);
        assert!((p.rho - 0.25).abs() < 1e-15);
    }

    #[test]
    fn select_params_scaling_identity() {
        // params(nu, c * norm) = params(nu / c, norm)
        let a = select_params(2.0, 3.0, 0.5).unwrap();
        let b = select_params(2.0 / 3.0, 1.0, 0.5).unwrap();
        assert!((a.eps - b.eps).abs() < 1e-15);
        assert!((a.rho - b.rho).abs() < 1e-15);
    }

    #[test]
    fn compatibility_of_equal_constants_is_exact() {
        let g = grid((6, 6, 8));
        let mut f = BoundaryFlux::zeros(&g);
        f.d1 = FaceProfile::from_fn(&g, |_, _| 1.0);
        f.d2 = FaceProfile::from_fn(&g, |_, _| 1.0);
        let rep = check_compatibility(&[f], &g, 1e-12);
        assert!(rep.ok);
        assert!(rep.max_residual < 1e-14);
    }

    #[test]
    fn gross_imbalance_is_flagged() {
        let g = grid((6, 6, 8));
        let mut f = BoundaryFlux::zeros(&g);
        f.d1 = FaceProfile::from_fn(&g, |_, _| 1.0);
        let rep = check_compatibility(&[f], &g, 1e-12);
        assert!(!rep.ok);
        assert!((rep.max_residual - 1.0).abs() < 1e-13);
    }

    #[test]
    fn parabolic_profile_matched_by_quadrature_constant() {
        let g = grid((6, 6, 8));
        let mut f = BoundaryFlux::zeros(&g);
        f.d1 = FaceProfile::from_fn(&g, |x, y| 16.0 * x * (1.0 - x) * y * (1.0 - y));
        let matched = f.inflow_integral(&g) / g.patch_area(Patch::S2Hi);
        f.d2 = FaceProfile::from_fn(&g, |_, _| matched);
        let rep = check_compatibility(&[f], &g, 1e-12);
        assert!(rep.ok, "residual {}", rep.max_residual);
    }

    #[test]
    fn constant_extension_properties() {
        let g = grid((5, 4, 6));
        let mut f = BoundaryFlux::zeros(&g);
        f.d1 = FaceProfile::from_fn(&g, |_, _| 1.0);
        f.d2 = FaceProfile::from_fn(&g, |x, _| x);
        let (e1, e2) = extend_flux(&f, &g);
        assert!(e1.data.iter().all(|v| (v - 1.0).abs() < 1e-15));
        // Trace on S2 equals the profile and the x3 derivative vanishes.
        let s = g.spec;
        for j in 0..s.ny {
            for i in 0..s.nx {
                for k in 1..s.nz {
                    let dz = e2.data[g.cell(i, j, k)] - e2.data[g.cell(i, j, k - 1)];
                    assert_eq!(dz, 0.0);
                }
                assert!((e2.data[g.cell(i, j, 0)] - f.d2.at(i, j)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn carrier_field_plateau_and_support() {
        let g = grid((4, 4, 16));
        let mut f = BoundaryFlux::zeros(&g);
        f.d1 = FaceProfile::from_fn(&g, |_, _| 1.0);
        f.d2 = FaceProfile::from_fn(&g, |_, _| 1.0);
        // Plateau depth r = 0.2 exp(-2/3) about 0.103 > hz = 1/16, support 0.2 < a/2.
        let p = params(1.5, 0.2);
        assert!(p.r > g.hz);
        let b = build_b(&f, &p, &g).unwrap();
        let s = g.spec;
        for j in 0..s.ny {
            for i in 0..s.nx {
                // Trace faces sit on the plateau.
                assert_eq!(b.w[g.wf(i, j, 0)], 1.0);
                assert_eq!(b.w[g.wf(i, j, s.nz)], 1.0);
                // Faces beyond the support are zero: sigma = min(a+z, a-z) > rho.
                for k in 0..=s.nz {
                    let z = -s.a + k as f64 * g.hz;
                    if g.end_face_distance(z) > p.rho {
                        assert_eq!(b.w[g.wf(i, j, k)], 0.0);
                    }
                }
                assert!(b.u.iter().all(|v| *v == 0.0));
                assert!(b.v.iter().all(|v| *v == 0.0));
            }
        }
        // Discrete divergence theorem for compatible data.
        assert!(div_b_integral(&b).abs() < 1e-12);
    }

    #[test]
    fn zero_flux_gives_zero_carrier() {
        let g = grid((4, 4, 8));
        let f = BoundaryFlux::zeros(&g);
        let b = build_b(&f, &params(0.5, 0.2), &g).unwrap();
        assert!(b.w.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn overlapping_supports_are_rejected() {
        let g = grid((4, 4, 8));
        let f = BoundaryFlux::zeros(&g);
        assert!(build_b(&f, &params(0.5, 0.3), &g).is_err());
    }

    #[test]
    fn lift_traces_and_divergence() {
        let g = grid((6, 6, 12));
        let mut f = BoundaryFlux::zeros(&g);
        f.d1 = FaceProfile::from_fn(&g, |_, _| 1.0);
        f.d2 = FaceProfile::from_fn(&g, |_, _| 1.0);
        let p = params(0.5, 0.2);
        let lift = build_lift(&f, &p, &g, 1e-11).unwrap();
        // Normal trace is exact by construction of the boundary closure.
        assert!(
            lift.trace_defect_s2 < 1e-12,
            "S2 defect {}",
            lift.trace_defect_s2
        );
        assert!(
            lift.trace_defect_s1 < 1e-12,
            "S1 defect {}",
            lift.trace_defect_s1
        );
        // div delta at the solver tolerance.
        let dd = divergence(&lift.delta);
        let vol = g.cell_volume();
        let div_norm: f64 = dd.data.iter().map(|v| v * v * vol).sum::<f64>().sqrt();
        assert!(div_norm < 1e-8, "div delta = {div_norm:e}");
        // Steady data means zero lift derivative.
        assert!(lift.delta_t.w.iter().all(|v| *v == 0.0));
        // Flux conservation: int_{S2(a)} delta.n = Lx*Ly.
        let tr = lift.delta.normal_trace(Patch::S2Hi);
        let total = integrate_surface(&tr, &g, Patch::S2Hi).unwrap();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_flux_lift_is_zero() {
        let g = grid((4, 4, 8));
        let f = BoundaryFlux::zeros(&g);
        let lift = build_lift(&f, &params(0.5, 0.2), &g, 1e-11).unwrap();
        assert!(lift.delta.u.iter().all(|v| *v == 0.0));
        assert!(lift.delta.v.iter().all(|v| *v == 0.0));
        assert!(lift.delta.w.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn incompatible_flux_is_a_validation_error() {
        let g = grid((4, 4, 8));
        let mut f = BoundaryFlux::zeros(&g);
        f.d1 = FaceProfile::from_fn(&g, |_, _| 1.0);
        let err = build_lift(&f, &params(0.5, 0.2), &g, 1e-11).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn stale_potential_is_a_consistency_error() {
        let g = grid((4, 4, 8));
        let mut f = BoundaryFlux::zeros(&g);
        f.d1 = FaceProfile::from_fn(&g, |_, _| 1.0);
        f.d2 = FaceProfile::from_fn(&g, |_, _| 1.0);
        let p = params(0.75, 0.2);
        let b = build_b(&f, &p, &g).unwrap();
        let wrong_phi = ScalarField::from_fn(&g, |x, _, _| x * x);
        let err = build_delta(
            &b,
            &wrong_phi,
            &f,
            VectorField::zeros(&g),
            NeumannSolveReport::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Consistency(_)));
    }
}
