//! Incompressible Navier-Stokes flow in a finite box cylinder with slip
//! lateral walls and prescribed inflow/outflow through the end faces.
//!
//! The crate builds the boundary-data lift (logarithmic cutoff, constant
//! extension, potential correction), evolves the homogenized velocity on a
//! discretely divergence-free Galerkin basis (or the equivalent projection
//! form), tracks every term of the energy inequality per step, and certifies
//! the interval-wise global-boundedness criterion for non-vanishing flux.

pub mod domain;
pub mod energy;
pub mod error;
pub mod galerkin;
pub mod harness;
pub mod hopf;
pub mod norms;
pub mod poisson;

pub use error::{Error, Result};
