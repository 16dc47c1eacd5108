//! Built-in data scenarios and the CSV flux reader.
//!
//! Every built-in scenario is separable: unit-amplitude spatial profiles
//! under a scalar time modulation, so the lift is solved once per run.

use std::path::Path;
use std::sync::Arc;

use crate::domain::field::{FaceProfile, VectorField};
use crate::domain::grid::{Patch, StaggeredGrid};
use crate::error::{Error, Result};
use crate::galerkin::provider::Modulation;
use crate::harness::config::{FluxScenario, ForcingScenario, RunConfig};

/// Resolved flux data: unit profiles plus the time modulation.
#[derive(Debug, Clone)]
pub struct FluxData {
    pub d1: FaceProfile,
    pub d2: FaceProfile,
    pub modulation: Modulation,
}

impl FluxData {
    pub fn is_zero(&self) -> bool {
        self.d1.data.iter().all(|v| *v == 0.0) && self.d2.data.iter().all(|v| *v == 0.0)
    }
}

/// Resolved forcing data: unit field plus the time modulation.
#[derive(Debug, Clone)]
pub struct ForcingData {
    pub field: VectorField,
    pub modulation: Modulation,
}

impl ForcingData {
    pub fn is_zero(&self) -> bool {
        self.field.u.iter().all(|v| *v == 0.0)
            && self.field.v.iter().all(|v| *v == 0.0)
            && self.field.w.iter().all(|v| *v == 0.0)
    }
}

/// Builds the flux profiles of the configured scenario.
pub fn build_flux(config: &RunConfig, grid: &Arc<StaggeredGrid>) -> Result<FluxData> {
    let amp = config.flux_amplitude;
    match config.flux_scenario {
        FluxScenario::Zero => Ok(FluxData {
            d1: FaceProfile::zeros(grid),
            d2: FaceProfile::zeros(grid),
            modulation: Modulation::Steady,
        }),
        FluxScenario::Steady => Ok(FluxData {
            d1: FaceProfile::from_fn(grid, |_, _| amp),
            d2: FaceProfile::from_fn(grid, |_, _| amp),
            modulation: Modulation::Steady,
        }),
        FluxScenario::Parabolic => {
            let (lx, ly) = (grid.spec.lx, grid.spec.ly);
            let d1 = FaceProfile::from_fn(grid, |x, y| {
                16.0 * amp * (x / lx) * (1.0 - x / lx) * (y / ly) * (1.0 - y / ly)
            });
            // Outflow constant matched by the grid quadrature, so the
            // compatibility residual is exactly zero at this resolution.
            let inflow: f64 =
                d1.data.iter().sum::<f64>() * grid.hx * grid.hy / grid.patch_area(Patch::S2Hi);
            let d2 = FaceProfile::from_fn(grid, |_, _| inflow);
            Ok(FluxData {
                d1,
                d2,
                modulation: Modulation::Steady,
            })
        }
        FluxScenario::SinTime => Ok(FluxData {
            d1: FaceProfile::from_fn(grid, |_, _| 1.0),
            d2: FaceProfile::from_fn(grid, |_, _| 1.0),
            modulation: Modulation::Sinusoid {
                offset: config.flux_base * amp,
                amp: (1.0 - config.flux_base) * amp,
                omega: config.flux_omega,
            },
        }),
        FluxScenario::Csv => {
            let p1 = config
                .flux_csv_d1
                .as_ref()
                .ok_or_else(|| Error::Config("csv flux scenario needs flux_csv_d1".into()))?;
            let p2 = config
                .flux_csv_d2
                .as_ref()
                .ok_or_else(|| Error::Config("csv flux scenario needs flux_csv_d2".into()))?;
            let mut d1 = read_flux_csv(p1, grid)?;
            let mut d2 = read_flux_csv(p2, grid)?;
            d1.scale(amp);
            d2.scale(amp);
            Ok(FluxData {
                d1,
                d2,
                modulation: Modulation::Steady,
            })
        }
    }
}

/// Builds the forcing field of the configured scenario.
pub fn build_forcing(config: &RunConfig, grid: &Arc<StaggeredGrid>) -> ForcingData {
    match config.forcing_scenario {
        ForcingScenario::None => ForcingData {
            field: VectorField::zeros(grid),
            modulation: Modulation::Steady,
        },
        ForcingScenario::Sinusoidal => {
            let amp = config.forcing_amplitude;
            let (lx, ly, a) = (grid.spec.lx, grid.spec.ly, grid.spec.a);
            let field = VectorField::from_fn(grid, |x, y, z| {
                [
                    0.0,
                    0.0,
                    amp * (std::f64::consts::PI * x / lx).sin()
                        * (std::f64::consts::PI * y / ly).sin()
                        * (0.5 * std::f64::consts::PI * (z + a) / a).sin(),
                ]
            });
            ForcingData {
                field,
                modulation: Modulation::Steady,
            }
        }
    }
}

/// Reads one face profile from CSV rows `x1,x2,value`.
///
/// Every cross-section panel center must be covered by exactly one row
/// (within half a cell); sparse or misaligned files are rejected.
pub fn read_flux_csv(path: &Path, grid: &StaggeredGrid) -> Result<FaceProfile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Data(format!("cannot read flux csv {}: {e}", path.display())))?;
    let s = grid.spec;
    let mut data = vec![f64::NAN; s.nx * s.ny];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        // An optional header line is tolerated.
        if lineno == 0 && line.chars().any(|c| c.is_alphabetic()) {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(|p| p.trim()).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "flux csv {} line {}: expected x1,x2,value",
                path.display(),
                lineno + 1
            )));
        }
        let parse = |v: &str| -> Result<f64> {
            v.parse::<f64>().map_err(|_| {
                Error::Parse(format!(
                    "flux csv {} line {}: bad number {v:?}",
                    path.display(),
                    lineno + 1
                ))
            })
        };
        let x = parse(parts[0])?;
        let y = parse(parts[1])?;
        let val = parse(parts[2])?;
        let i = ((x / grid.hx) - 0.5).round() as isize;
        let j = ((y / grid.hy) - 0.5).round() as isize;
        if i < 0 || j < 0 || i as usize >= s.nx || j as usize >= s.ny {
            return Err(Error::Data(format!(
                "flux csv {} line {}: point ({x}, {y}) is outside the cross-section",
                path.display(),
                lineno + 1
            )));
        }
        let (i, j) = (i as usize, j as usize);
        let (cx, cy) = ((i as f64 + 0.5) * grid.hx, (j as f64 + 0.5) * grid.hy);
        if (x - cx).abs() > 0.5 * grid.hx || (y - cy).abs() > 0.5 * grid.hy {
            return Err(Error::Data(format!(
                "flux csv {} line {}: point ({x}, {y}) does not align with a panel center",
                path.display(),
                lineno + 1
            )));
        }
        data[j * s.nx + i] = val;
    }
    if let Some(pos) = data.iter().position(|v| v.is_nan()) {
        let (i, j) = (pos % s.nx, pos / s.nx);
        return Err(Error::Data(format!(
            "flux csv {}: panel ({}, {}) has no sample",
            path.display(),
            (i as f64 + 0.5) * grid.hx,
            (j as f64 + 0.5) * grid.hy
        )));
    }
    Ok(FaceProfile {
        nx: s.nx,
        ny: s.ny,
        data,
    })
}
