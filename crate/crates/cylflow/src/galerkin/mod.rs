//! Divergence-free Galerkin evolution of the homogenized velocity, the
//! source assembly, and the projection-method cross-validation stepper.

pub mod basis;
pub mod forms;
pub mod oracle;
pub mod provider;
pub mod sources;
pub mod stepper;

pub use basis::{build_divfree_basis, null_space_dimension, GalerkinBasis};
pub use provider::{
    FluxProvider, ForcingProvider, LiftProvider, LiftSample, ModulatedFlux, ModulatedForcing,
    ModulatedLift, Modulation, ZeroFlux, ZeroForcing, ZeroLift,
};
pub use sources::{assemble_sources, SourceTerms};
pub use stepper::{
    momentum_rate, project_initial, projection_step, reconstruct_v, rhs_ode, stability_bound, step,
    EvolveParams, GalerkinState, ProjectionState,
};
