//! Batch front-end for the cylinder-flow solver and certifier.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cylflow::harness::{
    run_certify, run_lift, run_norms, run_simulate, run_sweep, write_sweep_csv, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "cylflow",
    about = "Incompressible flow in a finite cylinder with slip walls and inflow/outflow: \
             simulation, boundary-data lift, energy ledger and boundedness certification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the key-value configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory override.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed override for the randomized initial states.
    #[arg(long)]
    seed: Option<u64>,
    /// Resolution override, e.g. 12x12x24.
    #[arg(long)]
    resolution: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline: lift, evolution, ledger, reports.
    Simulate(CommonArgs),
    /// Build the boundary-data lift only and report its diagnostics.
    Lift(CommonArgs),
    /// Re-certify a persisted ledger against the configured calibration.
    Certify {
        #[command(flatten)]
        common: CommonArgs,
        /// Path to the ledger CSV produced by `simulate`.
        #[arg(long)]
        ledger: PathBuf,
    },
    /// Report the data norms and cutoff parameters of the configured scenario.
    Norms(CommonArgs),
    /// Sweep over viscosity, flux amplitude and resolution.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated viscosities, e.g. 0.5,1.0.
        #[arg(long, default_value = "1.0")]
        nu_list: String,
        /// Comma-separated flux amplitudes.
        #[arg(long, default_value = "1.0")]
        amp_list: String,
        /// Comma-separated resolutions, e.g. 6x6x12,12x12x24.
        #[arg(long, default_value = "6x6x12")]
        res_list: String,
    },
}

fn parse_resolution(text: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = text.split('x').collect();
    if parts.len() != 3 {
        return Err(format!("bad resolution {text:?}, expected NXxNYxNZ"));
    }
    let mut dims = [0usize; 3];
    for (slot, part) in dims.iter_mut().zip(&parts) {
        *slot = part
            .parse::<usize>()
            .map_err(|_| format!("bad resolution component {part:?}"))?;
    }
    Ok((dims[0], dims[1], dims[2]))
}

fn load_config(common: &CommonArgs) -> cylflow::Result<RunConfig> {
    let mut cfg = RunConfig::from_file(&common.config)?;
    if let Some(out) = &common.out {
        cfg.out_dir = out.clone();
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(res) = &common.resolution {
        let (nx, ny, nz) = parse_resolution(res).map_err(cylflow::Error::Config)?;
        cfg.spec.nx = nx;
        cfg.spec.ny = ny;
        cfg.spec.nz = nz;
    }
    Ok(cfg)
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number {p:?} in list"))
        })
        .collect()
}

fn run() -> cylflow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate(common) => {
            let cfg = load_config(&common)?;
            let artifacts = run_simulate(&cfg)?;
            let r = &artifacts.report;
            println!(
                "simulate: engine={} modes={} dt={:.3e} steps={} t_end={}",
                r.engine, r.n_modes, r.dt, r.steps, r.t_end
            );
            println!(
                "  integrated estimate: {} (lhs {:.6e} <= rhs {:.6e})",
                if r.integrated_estimate.pass {
                    "pass"
                } else {
                    "FAIL"
                },
                r.integrated_estimate.lhs,
                r.integrated_estimate.rhs
            );
            if let Some(a) = &r.absorption {
                println!(
                    "  absorption: {} (coefficient {:.6e}, budget {:.6e}{})",
                    if a.ok { "pass" } else { "FLAGGED" },
                    a.coefficient,
                    a.budget,
                    if a.clamped { ", clamped" } else { "" }
                );
            }
            if let Some(d) = &r.decay {
                println!(
                    "  decay: {} (late slope {:.4})",
                    if d.ok { "pass" } else { "FAIL" },
                    d.late_slope
                );
            }
            if let Some(t2) = &r.global_criterion {
                println!(
                    "  global criterion: {}{}",
                    if t2.ok { "pass" } else { "FAIL" },
                    t2.failing_interval
                        .map(|k| format!(" (interval {k})"))
                        .unwrap_or_default()
                );
            }
            println!("  artifacts under {}", artifacts.out_dir.display());
        }
        Command::Lift(common) => {
            let cfg = load_config(&common)?;
            let report = run_lift(&cfg)?;
            println!(
                "lift: trace defect S2 {:.3e}, S1 {:.3e}, |div delta| {:.3e}, {} solver iterations",
                report.trace_defect_s2,
                report.trace_defect_s1,
                report.div_delta_l2,
                report.poisson_iterations
            );
            if let Some(w) = &report.weighted_estimate {
                println!(
                    "  weighted estimate: |grad phi|_L3 / |div b|_(3,{}) = {:.6}",
                    w.mu, w.ratio
                );
            }
        }
        Command::Certify { common, ledger } => {
            let cfg = load_config(&common)?;
            let report = run_certify(&cfg, &ledger)?;
            println!(
                "certify: integrated estimate {} (lhs {:.6e} <= rhs {:.6e})",
                if report.integrated_estimate.pass {
                    "pass"
                } else {
                    "FAIL"
                },
                report.integrated_estimate.lhs,
                report.integrated_estimate.rhs
            );
            if let Some(t2) = &report.global_criterion {
                println!(
                    "  global criterion: {} (budget {:.6e})",
                    if t2.ok { "pass" } else { "FAIL" },
                    t2.budget
                );
                for iv in &t2.intervals {
                    println!(
                        "    interval {}: functional {:.6e}, margin {:.6e}, |v(kT)| {:.6e}",
                        iv.k, iv.data_functional, iv.margin, iv.v_norm_start
                    );
                }
            }
        }
        Command::Norms(common) => {
            let cfg = load_config(&common)?;
            let report = run_norms(&cfg)?;
            println!(
                "norms: embedding {}",
                if report.embedding_ok {
                    "ok"
                } else {
                    "violated"
                }
            );
            let n = &report.data_norms_unit;
            println!("  ||d~||_W12 = {:.6e}", n.w12);
            println!("  ||d~||_W13 = {:.6e}", n.w13);
            println!(
                "  ||d~||_Wsp = {:.6e} (sup over time {:.6e})",
                n.wsp, report.sup_wsp
            );
            println!("  trace W^(s-1/p)_p = {:.6e}", report.trace_norm_wp);
            println!("  trace W^(s-1/p)_3 = {:.6e}", report.trace_norm_w3);
            if let Some(p) = &report.hopf_params {
                println!(
                    "  cutoff: eps = {:.6e}, rho = {:.6e}, r = {:.6e}{}",
                    p.eps,
                    p.rho,
                    p.r,
                    if p.clamped { " (clamped)" } else { "" }
                );
            }
        }
        Command::Sweep {
            common,
            nu_list,
            amp_list,
            res_list,
        } => {
            let cfg = load_config(&common)?;
            let nus = parse_f64_list(&nu_list).map_err(cylflow::Error::Config)?;
            let amps = parse_f64_list(&amp_list).map_err(cylflow::Error::Config)?;
            let resolutions: Vec<(usize, usize, usize)> = res_list
                .split(',')
                .map(|r| parse_resolution(r.trim()).map_err(cylflow::Error::Config))
                .collect::<cylflow::Result<_>>()?;
            let cells = run_sweep(&cfg, &nus, &amps, &resolutions)?;
            std::fs::create_dir_all(&cfg.out_dir)?;
            let path = cfg.out_dir.join("sweep.csv");
            write_sweep_csv(&path, &cells)?;
            println!("sweep: {} cells -> {}", cells.len(), path.display());
            for c in &cells {
                println!(
                    "  nu={} amp={} {}x{}x{}: {}",
                    c.nu, c.amplitude, c.nx, c.ny, c.nz, c.status
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
