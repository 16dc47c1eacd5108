//! Time-dependent data providers for the steppers: lift, forcing, and flux
//! samples at arbitrary stage times.
//!
//! The built-in scenarios are separable, a fixed spatial profile times a
//! scalar modulation, so one lift solve serves the whole run and the lift
//! time derivative is the modulation derivative times the same field.

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::domain::field::{FaceProfile, VectorField};
use crate::domain::grid::StaggeredGrid;
use crate::hopf::{BoundaryFlux, LiftFields};

/// Scalar time modulation of a separable data profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Modulation {
    Steady,
    /// `offset + amp * sin(omega t)`; stays positive when `offset > |amp|`,
    /// the non-vanishing regime.
    Sinusoid {
        offset: f64,
        amp: f64,
        omega: f64,
    },
}

impl Modulation {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Modulation::Steady => 1.0,
            Modulation::Sinusoid { offset, amp, omega } => offset + amp * (omega * t).sin(),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            Modulation::Steady => 0.0,
            Modulation::Sinusoid { amp, omega, .. } => amp * omega * (omega * t).cos(),
        }
    }

    /// Largest modulation magnitude over all times.
    pub fn sup(&self) -> f64 {
        match self {
            Modulation::Steady => 1.0,
            Modulation::Sinusoid { offset, amp, .. } => offset.abs() + amp.abs(),
        }
    }

    pub fn min(&self) -> f64 {
        match self {
            Modulation::Steady => 1.0,
            Modulation::Sinusoid { offset, amp, .. } => offset - amp.abs(),
        }
    }
}

/// Lift sample at one stage time.
#[derive(Debug, Clone)]
pub struct LiftSample {
    pub delta: VectorField,
    pub delta_t: VectorField,
}

pub trait LiftProvider {
    fn sample(&self, t: f64) -> LiftSample;
    fn is_zero(&self) -> bool {
        false
    }
}

pub struct ZeroLift {
    pub grid: Arc<StaggeredGrid>,
}

impl LiftProvider for ZeroLift {
    fn sample(&self, _t: f64) -> LiftSample {
        LiftSample {
            delta: VectorField::zeros(&self.grid),
            delta_t: VectorField::zeros(&self.grid),
        }
    }
    fn is_zero(&self) -> bool {
        true
    }
}

/// Separable lift: a unit-profile lift scaled by the modulation.
pub struct ModulatedLift {
    pub base: LiftFields,
    pub modulation: Modulation,
}

impl LiftProvider for ModulatedLift {
    fn sample(&self, t: f64) -> LiftSample {
        let mut delta = self.base.delta.clone();
        delta.scale(self.modulation.value(t));
        let mut delta_t = self.base.delta.clone();
        delta_t.scale(self.modulation.derivative(t));
        LiftSample { delta, delta_t }
    }
}

pub trait ForcingProvider {
    fn sample(&self, t: f64) -> VectorField;
    fn is_zero(&self) -> bool {
        false
    }
}

pub struct ZeroForcing {
    pub grid: Arc<StaggeredGrid>,
}

impl ForcingProvider for ZeroForcing {
    fn sample(&self, _t: f64) -> VectorField {
        VectorField::zeros(&self.grid)
    }
    fn is_zero(&self) -> bool {
        true
    }
}

pub struct ModulatedForcing {
    pub base: VectorField,
    pub modulation: Modulation,
}

impl ForcingProvider for ModulatedForcing {
    fn sample(&self, t: f64) -> VectorField {
        let mut f = self.base.clone();
        f.scale(self.modulation.value(t));
        f
    }
}

pub trait FluxProvider {
    fn flux_at(&self, t: f64) -> BoundaryFlux;
    fn is_zero(&self) -> bool {
        false
    }
}

pub struct ZeroFlux {
    pub grid: Arc<StaggeredGrid>,
}

impl FluxProvider for ZeroFlux {
    fn flux_at(&self, _t: f64) -> BoundaryFlux {
        BoundaryFlux::zeros(&self.grid)
    }
    fn is_zero(&self) -> bool {
        true
    }
}

/// Separable flux: unit profiles scaled by the modulation, with the exact
/// time derivative.
pub struct ModulatedFlux {
    pub d1: FaceProfile,
    pub d2: FaceProfile,
    pub modulation: Modulation,
}

impl FluxProvider for ModulatedFlux {
    fn flux_at(&self, t: f64) -> BoundaryFlux {
        let psi = self.modulation.value(t);
        let psi_t = self.modulation.derivative(t);
        let mut d1 = self.d1.clone();
        d1.scale(psi);
        let mut d2 = self.d2.clone();
        d2.scale(psi);
        let mut d1_t = self.d1.clone();
        d1_t.scale(psi_t);
        let mut d2_t = self.d2.clone();
        d2_t.scale(psi_t);
        BoundaryFlux { d1, d2, d1_t, d2_t }
    }
}
