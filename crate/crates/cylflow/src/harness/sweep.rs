//! Parameter sweep over viscosity, flux amplitude and resolution.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::Result;
use crate::harness::config::RunConfig;
use crate::harness::runner::run_simulate;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepCell {
    pub nu: f64,
    pub amplitude: f64,
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    /// "ok" or the error text; failed cells do not stop the sweep.
    pub status: String,
    pub absorption_margin: Option<f64>,
    pub poisson_ratio: Option<f64>,
    pub korn_min: Option<f64>,
    pub korn_max: Option<f64>,
    pub minimal_c_phi: Option<f64>,
    pub decay_slope: Option<f64>,
}

pub const SWEEP_HEADER: &str =
    "nu,amplitude,nx,ny,nz,status,absorption_margin,poisson_ratio,korn_min,korn_max,minimal_c_phi,decay_slope";

fn opt(v: &Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

/// Runs one simulation per grid cell and collects the summary table.
pub fn run_sweep(
    base: &RunConfig,
    nus: &[f64],
    amplitudes: &[f64],
    resolutions: &[(usize, usize, usize)],
) -> Result<Vec<SweepCell>> {
    let mut cells = Vec::new();
    for &nu in nus {
        for &amp in amplitudes {
            for &(nx, ny, nz) in resolutions {
                let mut cfg = base.clone();
                cfg.spec.nu = nu;
                cfg.flux_amplitude = amp;
                cfg.spec.nx = nx;
                cfg.spec.ny = ny;
                cfg.spec.nz = nz;
                cfg.out_dir = base
                    .out_dir
                    .join(format!("cell_nu{nu}_amp{amp}_{nx}x{ny}x{nz}"));
                let cell = match run_simulate(&cfg) {
                    Ok(artifacts) => {
                        let r = &artifacts.report;
                        SweepCell {
                            nu,
                            amplitude: amp,
                            nx,
                            ny,
                            nz,
                            status: "ok".into(),
                            absorption_margin: r.absorption.as_ref().map(|a| a.margin),
                            poisson_ratio: r.weighted_estimate.as_ref().map(|w| w.ratio),
                            korn_min: Some(r.korn_min),
                            korn_max: Some(r.korn_max),
                            minimal_c_phi: r.integrated_estimate.minimal_c_phi,
                            decay_slope: r.decay.as_ref().map(|d| d.late_slope),
                        }
                    }
                    Err(e) => SweepCell {
                        nu,
                        amplitude: amp,
                        nx,
                        ny,
                        nz,
                        status: format!("{e}"),
                        absorption_margin: None,
                        poisson_ratio: None,
                        korn_min: None,
                        korn_max: None,
                        minimal_c_phi: None,
                        decay_slope: None,
                    },
                };
                cells.push(cell);
            }
        }
    }
    Ok(cells)
}

/// Writes the summary table as CSV.
pub fn write_sweep_csv(path: &Path, cells: &[SweepCell]) -> Result<()> {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            c.nu,
            c.amplitude,
            c.nx,
            c.ny,
            c.nz,
            c.status.replace(',', ";"),
            opt(&c.absorption_margin),
            opt(&c.poisson_ratio),
            opt(&c.korn_min),
            opt(&c.korn_max),
            opt(&c.minimal_c_phi),
            opt(&c.decay_slope)
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}
