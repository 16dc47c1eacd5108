//! Batch front-end: configuration, scenarios, run orchestration, sweep and
//! persistent artifacts.

pub mod checkpoint;
pub mod config;
pub mod runner;
pub mod scenario;
pub mod sweep;

pub use checkpoint::{read_checkpoint, write_checkpoint, Checkpoint, CheckpointMode};
pub use config::{Engine, FluxScenario, ForcingScenario, InitialCondition, RunConfig};
pub use runner::{
    prepare, run_certify, run_lift, run_norms, run_simulate, CertifyReport, LiftReport,
    NormsReport, RunArtifacts, SimulateReport,
};
pub use scenario::{build_flux, build_forcing, read_flux_csv, FluxData, ForcingData};
pub use sweep::{run_sweep, write_sweep_csv, SweepCell};
