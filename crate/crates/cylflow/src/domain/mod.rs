//! Cylinder domain, staggered discretization, discrete calculus and
//! quadrature.

pub mod field;
pub mod grid;
pub mod ops;
pub mod quad;
pub mod vtk;

pub use field::{FaceProfile, ScalarField, VectorField};
pub use grid::{build_grid, BoundaryFrame, CylinderSpec, FaceClass, Patch, StaggeredGrid};
