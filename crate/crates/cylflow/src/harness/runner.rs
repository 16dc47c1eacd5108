//! Scenario execution: lift construction, evolution loop, ledger recording,
//! certification and artifact output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::domain::field::VectorField;
use crate::domain::grid::{build_grid, StaggeredGrid};
use crate::domain::quad::norm_l2_mass;
use crate::domain::vtk;
use crate::energy::certify::{
    absorption_check, check_global_criterion, decay_check, interval_estimate,
    verify_integrated_estimate, AbsorptionReport, DecayReport, GlobalCriterion,
    GlobalCriterionReport, IntegratedEstimateReport, IntervalEstimateReport,
};
use crate::energy::data::{flux_data_norms, FluxDataNorms};
use crate::energy::ledger::{make_row, step_energy_residual, EnergyLedger, ScaledDataNorms};
use crate::error::{Error, Result};
use crate::galerkin::basis::{build_divfree_basis, null_space_dimension, GalerkinBasis};
use crate::galerkin::provider::{
    ForcingProvider, LiftProvider, ModulatedForcing, ModulatedLift, ZeroForcing, ZeroLift,
};
use crate::galerkin::stepper::{
    project_div_free, projection_step, stability_bound, step, EvolveParams, GalerkinState,
    ProjectionState,
};
use crate::harness::checkpoint::{faces_payload, write_checkpoint, Checkpoint, CheckpointMode};
use crate::harness::config::{Engine, InitialCondition, RunConfig};
use crate::harness::scenario::{build_flux, build_forcing, FluxData};
use crate::hopf::{
    build_lift, check_compatibility, compat_tol, select_params, BoundaryFlux, CompatibilityReport,
    HopfParams, LiftFields,
};
use crate::poisson::{verify_weighted_estimate, WeightedEstimateReport};

/// Null-space cap below which the automatic engine choice builds the
/// explicit basis.
const GALERKIN_AUTO_CAP: usize = 1500;

/// Hard cap on an explicitly requested basis; past this the
/// orthonormalization cost dominates the run and the projection engine
/// integrates the identical system.
const GALERKIN_EXPLICIT_CAP: usize = 3000;

/// Safety factor applied to the reported stability bound when the step is
/// chosen automatically.
const AUTO_DT_SAFETY: f64 = 0.45;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulateReport {
    pub engine: String,
    pub n_modes: usize,
    pub dt: f64,
    pub steps: usize,
    pub t_end: f64,
    pub compatibility: CompatibilityReport,
    pub hopf_params: Option<HopfParams>,
    pub absorption: Option<AbsorptionReport>,
    pub lift_trace_defect_s2: f64,
    pub lift_trace_defect_s1: f64,
    pub lift_div_l2: f64,
    pub poisson_iterations: usize,
    pub weighted_estimate: Option<WeightedEstimateReport>,
    pub integrated_estimate: IntegratedEstimateReport,
    pub decay: Option<DecayReport>,
    pub global_criterion: Option<GlobalCriterionReport>,
    pub korn_min: f64,
    pub korn_max: f64,
    pub trace_norm_wp: f64,
    pub trace_norm_w3: f64,
    pub data_norms_unit: FluxDataNorms,
    pub sup_wsp: f64,
    pub final_w_l2: f64,
    pub final_v_l2: f64,
    pub max_energy_residual: f64,
}

#[derive(Debug)]
pub struct RunArtifacts {
    pub report: SimulateReport,
    pub ledger: EnergyLedger,
    pub out_dir: PathBuf,
}

enum EngineState {
    Galerkin {
        basis: GalerkinBasis,
        state: GalerkinState,
    },
    Projection(ProjectionState),
}

impl EngineState {
    fn w(&self) -> &VectorField {
        match self {
            EngineState::Galerkin { state, .. } => &state.w,
            EngineState::Projection(s) => &s.w,
        }
    }

    fn t(&self) -> f64 {
        match self {
            EngineState::Galerkin { state, .. } => state.t,
            EngineState::Projection(s) => s.t,
        }
    }
}

fn random_coefficients(n: usize, seed: u64, norm: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let len: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len > 0.0 {
        for x in &mut c {
            *x *= norm / len;
        }
    }
    c
}

fn random_divfree_field(
    grid: &Arc<StaggeredGrid>,
    seed: u64,
    norm: f64,
    tol: f64,
) -> Result<VectorField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = VectorField::zeros(grid);
    for v in w.u.iter_mut().chain(&mut w.v).chain(&mut w.w) {
        *v = rng.random::<f64>() - 0.5;
    }
    project_div_free(&mut w, tol)?;
    let len = norm_l2_mass(&w);
    if len > 0.0 {
        w.scale(norm / len);
    }
    Ok(w)
}

/// Everything resolved before stepping starts.
pub struct PreparedRun {
    pub grid: Arc<StaggeredGrid>,
    pub flux: FluxData,
    pub forcing_unit_l65: f64,
    pub lift_provider: Box<dyn LiftProvider>,
    pub forcing_provider: Box<dyn ForcingProvider>,
    pub unit_lift: Option<LiftFields>,
    pub data_norms: FluxDataNorms,
    pub params: Option<HopfParams>,
    pub compatibility: CompatibilityReport,
    pub dt: f64,
    pub steps_per_interval: usize,
    pub params_evolve: EvolveParams,
}

/// Resolves providers, the lift, the parameter rule and the step size.
pub fn prepare(config: &RunConfig) -> Result<PreparedRun> {
    config.validate()?;
    let grid = build_grid(config.spec)?;
    let flux = build_flux(config, &grid)?;
    let forcing = build_forcing(config, &grid);

    // Compatibility of the unit profiles; the modulation scales both sides.
    let unit_flux = BoundaryFlux {
        d1: flux.d1.clone(),
        d2: flux.d2.clone(),
        d1_t: crate::domain::field::FaceProfile::zeros(&grid),
        d2_t: crate::domain::field::FaceProfile::zeros(&grid),
    };
    let compatibility =
        check_compatibility(std::slice::from_ref(&unit_flux), &grid, compat_tol(&grid));
    if !flux.is_zero() && !compatibility.ok {
        return Err(Error::Validation(format!(
            "incompatible flux profiles: residual {:e}",
            compatibility.max_residual
        )));
    }
    if !flux.is_zero() && flux.modulation.min() < 0.0 {
        return Err(Error::Validation(format!(
            "flux modulation goes negative (minimum {}); inflow and outflow must stay nonnegative",
            flux.modulation.min()
        )));
    }

    let (data_norms, params, unit_lift): (FluxDataNorms, Option<HopfParams>, Option<LiftFields>) =
        if flux.is_zero() {
            (FluxDataNorms::default(), None, None)
        } else {
            let norms = flux_data_norms(&unit_flux, &grid, config.norms.s, config.norms.p)?;
            let sup_wsp = norms.wsp * flux.modulation.sup();
            let params = select_params(config.spec.nu, sup_wsp, config.spec.a)?;
            let lift = build_lift(&unit_flux, &params, &grid, config.poisson_tol)?;
            (norms, Some(params), Some(lift))
        };

    let lift_provider: Box<dyn LiftProvider> = match &unit_lift {
        None => Box::new(ZeroLift { grid: grid.clone() }),
        Some(lift) => Box::new(ModulatedLift {
            base: lift.clone(),
            modulation: flux.modulation,
        }),
    };
    let forcing_unit_l65 = crate::norms::lp_norm_vector(&forcing.field, 1.2)?;
    let forcing_provider: Box<dyn ForcingProvider> = if forcing.is_zero() {
        Box::new(ZeroForcing { grid: grid.clone() })
    } else {
        Box::new(ModulatedForcing {
            base: forcing.field.clone(),
            modulation: forcing.modulation,
        })
    };

    // Step size: configured, or the safety fraction of the reported bound.
    let max_panel = flux
        .d1
        .data
        .iter()
        .chain(&flux.d2.data)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let v_inf_est = flux.modulation.sup() * max_panel
        + if matches!(config.initial_condition, InitialCondition::Random) {
            config.initial_norm
        } else {
            0.0
        }
        + 0.5 * config.forcing_amplitude;
    let bound = stability_bound(&grid, config.spec.nu, v_inf_est.max(1e-8));
    let dt = if config.dt > 0.0 {
        if config.dt > bound {
            return Err(Error::Config(format!(
                "dt = {} exceeds the stability bound {bound:.3e}",
                config.dt
            )));
        }
        config.dt
    } else {
        AUTO_DT_SAFETY * bound
    };
    // Land the interval boundaries exactly on steps.
    let steps_per_interval = (config.t_interval / dt).ceil().max(1.0) as usize;
    let dt = config.t_interval / steps_per_interval as f64;

    let mut params_evolve = EvolveParams::new(config.spec.nu, config.spec.gamma);
    params_evolve.poisson_tol = config.poisson_tol;

    Ok(PreparedRun {
        grid,
        flux,
        forcing_unit_l65,
        lift_provider,
        forcing_provider,
        unit_lift,
        data_norms,
        params,
        compatibility,
        dt,
        steps_per_interval,
        params_evolve,
    })
}

/// Executes the full pipeline and writes the artifacts under
/// `config.out_dir`.
pub fn run_simulate(config: &RunConfig) -> Result<RunArtifacts> {
    let prep = prepare(config)?;
    let grid = prep.grid.clone();
    let dt = prep.dt;
    let total_steps = prep.steps_per_interval * config.intervals;

    // Engine resolution.
    let full_dim = null_space_dimension(&grid);
    let use_galerkin = match config.engine {
        Engine::Galerkin => true,
        Engine::Projection => false,
        Engine::Auto => config.n_modes > 0 || full_dim <= GALERKIN_AUTO_CAP,
    };
    let n_modes = if config.n_modes == 0 {
        full_dim
    } else {
        config.n_modes
    };
    if use_galerkin && n_modes > GALERKIN_EXPLICIT_CAP {
        return Err(Error::Config(format!(
            "an explicit basis with {n_modes} modes is beyond the orthonormalization budget \
             ({GALERKIN_EXPLICIT_CAP}); use engine = projection, which integrates the same \
             full-space system"
        )));
    }

    let mut engine = if use_galerkin {
        let basis = build_divfree_basis(&grid, Some(n_modes))?;
        let coeffs = match config.initial_condition {
            InitialCondition::Lift => vec![0.0; basis.len()],
            InitialCondition::Random => {
                random_coefficients(basis.len(), config.seed, config.initial_norm)
            }
        };
        let state = GalerkinState::new(&basis, coeffs, 0.0);
        EngineState::Galerkin { basis, state }
    } else {
        let w = match config.initial_condition {
            InitialCondition::Lift => VectorField::zeros(&grid),
            InitialCondition::Random => {
                random_divfree_field(&grid, config.seed, config.initial_norm, config.poisson_tol)?
            }
        };
        EngineState::Projection(ProjectionState { t: 0.0, w })
    };

    // Absorption and weighted-estimate reports from the unit lift.
    let sup_wsp = prep.data_norms.wsp * prep.flux.modulation.sup();
    let psi_sup = prep.flux.modulation.sup();
    let absorption = match &prep.params {
        Some(params) => Some(absorption_check(
            params,
            config.spec.nu,
            config.norms.mu,
            prep.data_norms.sup_l3_s2 * psi_sup,
            prep.data_norms.sup_dz_l3_s2 * psi_sup,
            prep.data_norms.w13 * psi_sup,
            prep.data_norms.w12 * psi_sup,
        )?),
        None => None,
    };
    let weighted_estimate = match &prep.unit_lift {
        Some(lift) => Some(verify_weighted_estimate(
            &lift.b,
            &lift.phi,
            config.norms.mu,
        )?),
        None => None,
    };
    let (lift_s2, lift_s1, lift_div, poisson_iters) = match &prep.unit_lift {
        Some(l) => {
            let dd = crate::domain::ops::divergence(&l.delta);
            let vol = grid.cell_volume();
            let div_l2 = dd.data.iter().map(|v| v * v * vol).sum::<f64>().sqrt();
            (
                l.trace_defect_s2,
                l.trace_defect_s1,
                div_l2,
                l.solve_report.iterations,
            )
        }
        None => (0.0, 0.0, 0.0, 0),
    };

    // Output directory.
    std::fs::create_dir_all(&config.out_dir)?;

    // Evolution loop with ledger recording.
    let mut ledger = EnergyLedger::new();
    let phi_of_sup = config.calibration.phi(sup_wsp);
    let data_g = |t: f64| -> f64 {
        let psi = prep.flux.modulation.value(t);
        let psi_t = prep.flux.modulation.derivative(t);
        let f_l65 = prep.forcing_unit_l65; // steady forcing modulation
        2.0 * f_l65 * f_l65
            + phi_of_sup
                * ((prep.data_norms.w12 * psi).powi(2) + (prep.data_norms.w165 * psi_t).powi(2))
    };
    let mut rhs_acc = 0.0;
    let mut max_energy_residual = 0.0f64;

    let record_row = |ledger: &mut EnergyLedger,
                      t: f64,
                      w: &VectorField,
                      energy_res: f64,
                      rhs_acc: f64,
                      lift_provider: &dyn LiftProvider,
                      forcing_provider: &dyn ForcingProvider|
     -> Result<()> {
        let lift_sample = lift_provider.sample(t);
        let f_sample = forcing_provider.sample(t);
        let v = w.add(&lift_sample.delta);
        let psi = prep.flux.modulation.value(t);
        let psi_t = prep.flux.modulation.derivative(t);
        let scaled = ScaledDataNorms::from_unit(&prep.data_norms, psi, psi_t);
        let absorb = absorption.as_ref().map_or(0.0, |a| a.coefficient);
        let row = make_row(t, w, &v, &f_sample, &scaled, absorb, energy_res, rhs_acc)?;
        ledger.append(row)
    };

    record_row(
        &mut ledger,
        0.0,
        engine.w(),
        0.0,
        0.0,
        prep.lift_provider.as_ref(),
        prep.forcing_provider.as_ref(),
    )?;

    let snapshot =
        |idx: usize, w: &VectorField, lift_provider: &dyn LiftProvider, t: f64| -> Result<()> {
            if config.snapshot_every > 0 && idx % config.snapshot_every == 0 {
                let sample = lift_provider.sample(t);
                let v = w.add(&sample.delta);
                vtk::write_vector(&config.out_dir.join(format!("w_{idx:06}.vtk")), "w", w)?;
                vtk::write_vector(&config.out_dir.join(format!("v_{idx:06}.vtk")), "v", &v)?;
            }
            Ok(())
        };
    snapshot(0, engine.w(), prep.lift_provider.as_ref(), 0.0)?;

    for step_idx in 1..=total_steps {
        let t_old = engine.t();
        let w_old = engine.w().clone();
        match &mut engine {
            EngineState::Galerkin { basis, state } => {
                *state = step(
                    state,
                    dt,
                    basis,
                    prep.lift_provider.as_ref(),
                    prep.forcing_provider.as_ref(),
                    &prep.params_evolve,
                )?;
                // Coefficient/quadrature consistency of the cached field.
                let drift = (state.l2_sq_from_coeffs()
                    - crate::domain::quad::dot_mass(&state.w, &state.w))
                .abs();
                if drift > 1e-10 * state.l2_sq_from_coeffs().max(1.0) {
                    return Err(Error::Consistency(format!(
                        "coefficient norm drifted from the field quadrature by {drift:e}"
                    )));
                }
            }
            EngineState::Projection(state) => {
                *state = projection_step(
                    state,
                    dt,
                    prep.lift_provider.as_ref(),
                    prep.forcing_provider.as_ref(),
                    &prep.params_evolve,
                )?;
            }
        }
        let t_new = engine.t();
        rhs_acc += 0.5 * dt * (data_g(t_old) + data_g(t_new));

        if step_idx % config.ledger_every == 0
            || step_idx % prep.steps_per_interval == 0
            || step_idx == total_steps
        {
            let t_mid = t_old + 0.5 * dt;
            let lift_mid = prep.lift_provider.sample(t_mid);
            let f_mid = prep.forcing_provider.sample(t_mid);
            let energy_res = step_energy_residual(
                &w_old,
                engine.w(),
                dt,
                &lift_mid,
                &f_mid,
                &prep.params_evolve,
            );
            max_energy_residual = max_energy_residual.max(energy_res.abs());
            record_row(
                &mut ledger,
                t_new,
                engine.w(),
                energy_res,
                rhs_acc,
                prep.lift_provider.as_ref(),
                prep.forcing_provider.as_ref(),
            )?;
        }
        snapshot(step_idx, engine.w(), prep.lift_provider.as_ref(), t_new)?;
    }

    // Certification.
    let integrated_estimate = verify_integrated_estimate(
        &ledger,
        config.spec.nu,
        config.spec.gamma,
        &config.calibration,
    )?;
    let zero_data = prep.flux.is_zero() && prep.forcing_unit_l65 == 0.0;
    let decay = if zero_data {
        Some(decay_check(&ledger, config.spec.nu, dt)?)
    } else {
        None
    };
    let global_criterion = if config.a_bound > 0.0 {
        Some(check_global_criterion(
            &ledger,
            &GlobalCriterion {
                a: config.a_bound,
                t_interval: config.t_interval,
                nu: config.spec.nu,
                k_count: config.intervals,
            },
            &config.calibration,
        )?)
    } else {
        None
    };

    let korn_values: Vec<f64> = ledger
        .rows
        .iter()
        .map(|r| r.korn_ratio)
        .filter(|k| *k > 0.0)
        .collect();
    let korn_min = korn_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let korn_max = korn_values.iter().cloned().fold(0.0, f64::max);

    let final_w = engine.w();
    let final_lift = prep.lift_provider.sample(engine.t());
    let final_v = final_w.add(&final_lift.delta);

    let report = SimulateReport {
        engine: if use_galerkin {
            "galerkin"
        } else {
            "projection"
        }
        .to_string(),
        n_modes: if use_galerkin { n_modes } else { full_dim },
        dt,
        steps: total_steps,
        t_end: engine.t(),
        compatibility: prep.compatibility.clone(),
        hopf_params: prep.params,
        absorption,
        lift_trace_defect_s2: lift_s2,
        lift_trace_defect_s1: lift_s1,
        lift_div_l2: lift_div,
        poisson_iterations: poisson_iters,
        weighted_estimate,
        integrated_estimate,
        decay,
        global_criterion,
        korn_min: if korn_values.is_empty() {
            0.0
        } else {
            korn_min
        },
        korn_max,
        trace_norm_wp: prep.data_norms.trace_wp,
        trace_norm_w3: prep.data_norms.trace_w3,
        data_norms_unit: prep.data_norms,
        sup_wsp,
        final_w_l2: norm_l2_mass(final_w),
        final_v_l2: norm_l2_mass(&final_v),
        max_energy_residual,
    };

    // Artifacts.
    ledger.write_csv(&config.out_dir.join("ledger.csv"))?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Data(format!("report serialization failed: {e}")))?;
    std::fs::write(config.out_dir.join("report.json"), json)?;
    std::fs::write(config.out_dir.join("config.txt"), config.to_kv_text())?;
    let ckpt = match &engine {
        EngineState::Galerkin { state, .. } => Checkpoint {
            spec: config.spec,
            mode: CheckpointMode::Coefficients,
            t: state.t,
            payload: state.coeffs.clone(),
        },
        EngineState::Projection(state) => Checkpoint {
            spec: config.spec,
            mode: CheckpointMode::Faces,
            t: state.t,
            payload: faces_payload(&state.w),
        },
    };
    write_checkpoint(&config.out_dir.join("final.ckpt"), &ckpt)?;

    Ok(RunArtifacts {
        report,
        ledger,
        out_dir: config.out_dir.clone(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertifyReport {
    pub integrated_estimate: IntegratedEstimateReport,
    pub global_criterion: Option<GlobalCriterionReport>,
    pub interval_estimates: Vec<IntervalEstimateReport>,
    pub decay: Option<DecayReport>,
    pub v_trace: Vec<(f64, f64)>,
}

/// Re-certifies a persisted ledger against the configured calibration.
pub fn run_certify(config: &RunConfig, ledger_path: &Path) -> Result<CertifyReport> {
    config.validate()?;
    let ledger = EnergyLedger::read_csv(ledger_path)?;
    if ledger.is_empty() {
        return Err(Error::Domain("ledger has no rows".into()));
    }
    let integrated_estimate = verify_integrated_estimate(
        &ledger,
        config.spec.nu,
        config.spec.gamma,
        &config.calibration,
    )?;
    let t_end = ledger.rows.last().unwrap().t;
    let covered = (t_end / config.t_interval + 1e-9).floor() as usize;
    let k_count = covered.min(config.intervals);
    let global_criterion = if config.a_bound > 0.0 && k_count > 0 {
        Some(check_global_criterion(
            &ledger,
            &GlobalCriterion {
                a: config.a_bound,
                t_interval: config.t_interval,
                nu: config.spec.nu,
                k_count,
            },
            &config.calibration,
        )?)
    } else {
        None
    };
    let mut interval_estimates = Vec::new();
    for k in 0..k_count {
        let t = (k + 1) as f64 * config.t_interval;
        interval_estimates.push(interval_estimate(
            &ledger,
            k,
            t,
            config.t_interval,
            config.spec.nu,
            &config.calibration,
        )?);
    }
    let zero_data = ledger
        .rows
        .iter()
        .all(|r| r.f_l65_sq == 0.0 && r.d_w12_sq == 0.0 && r.ddt_w165_sq == 0.0);
    let decay = if zero_data && ledger.rows.len() > 1 {
        let dt = ledger.rows[1].t - ledger.rows[0].t;
        Some(decay_check(&ledger, config.spec.nu, dt)?)
    } else {
        None
    };
    let v_trace: Vec<(f64, f64)> = (0..=k_count)
        .filter_map(|k| {
            let t = k as f64 * config.t_interval;
            ledger.row_at(t).map(|r| (t, r.v_l2))
        })
        .collect();

    let report = CertifyReport {
        integrated_estimate,
        global_criterion,
        interval_estimates,
        decay,
        v_trace,
    };
    std::fs::create_dir_all(&config.out_dir)?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Data(format!("report serialization failed: {e}")))?;
    std::fs::write(config.out_dir.join("certify_report.json"), json)?;
    Ok(report)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiftReport {
    pub compatibility: CompatibilityReport,
    pub hopf_params: Option<HopfParams>,
    pub trace_defect_s2: f64,
    pub trace_defect_s1: f64,
    pub div_delta_l2: f64,
    pub poisson_iterations: usize,
    pub poisson_residual: f64,
    pub weighted_estimate: Option<WeightedEstimateReport>,
}

/// Builds the lift only and writes its fields and report.
pub fn run_lift(config: &RunConfig) -> Result<LiftReport> {
    let prep = prepare(config)?;
    std::fs::create_dir_all(&config.out_dir)?;
    let report = match &prep.unit_lift {
        Some(l) => {
            let dd = crate::domain::ops::divergence(&l.delta);
            let vol = prep.grid.cell_volume();
            let div_l2 = dd.data.iter().map(|v| v * v * vol).sum::<f64>().sqrt();
            vtk::write_vector(&config.out_dir.join("delta.vtk"), "delta", &l.delta)?;
            vtk::write_vector(&config.out_dir.join("b.vtk"), "b", &l.b)?;
            vtk::write_scalar(&config.out_dir.join("phi.vtk"), "phi", &l.phi)?;
            LiftReport {
                compatibility: prep.compatibility.clone(),
                hopf_params: prep.params,
                trace_defect_s2: l.trace_defect_s2,
                trace_defect_s1: l.trace_defect_s1,
                div_delta_l2: div_l2,
                poisson_iterations: l.solve_report.iterations,
                poisson_residual: l.solve_report.residual,
                weighted_estimate: Some(verify_weighted_estimate(&l.b, &l.phi, config.norms.mu)?),
            }
        }
        None => LiftReport {
            compatibility: prep.compatibility.clone(),
            hopf_params: None,
            trace_defect_s2: 0.0,
            trace_defect_s1: 0.0,
            div_delta_l2: 0.0,
            poisson_iterations: 0,
            poisson_residual: 0.0,
            weighted_estimate: None,
        },
    };
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Data(format!("report serialization failed: {e}")))?;
    std::fs::write(config.out_dir.join("lift_report.json"), json)?;
    Ok(report)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormsReport {
    pub embedding_ok: bool,
    pub data_norms_unit: FluxDataNorms,
    pub sup_wsp: f64,
    pub trace_norm_wp: f64,
    pub trace_norm_w3: f64,
    pub hopf_params: Option<HopfParams>,
}

/// Computes and writes the data-norm report of the configured scenario.
pub fn run_norms(config: &RunConfig) -> Result<NormsReport> {
    let prep = prepare(config)?;
    let report = NormsReport {
        embedding_ok: crate::norms::embedding_ok(config.norms.s, config.norms.p)?,
        sup_wsp: prep.data_norms.wsp * prep.flux.modulation.sup(),
        trace_norm_wp: prep.data_norms.trace_wp,
        trace_norm_w3: prep.data_norms.trace_w3,
        data_norms_unit: prep.data_norms,
        hopf_params: prep.params,
    };
    std::fs::create_dir_all(&config.out_dir)?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Data(format!("report serialization failed: {e}")))?;
    std::fs::write(config.out_dir.join("norms_report.json"), json)?;
    Ok(report)
}
