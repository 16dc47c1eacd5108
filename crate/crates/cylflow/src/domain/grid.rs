//! Cylinder geometry and its marker-and-cell discretization.
//!
//! The domain is the box cylinder `(0,Lx) x (0,Ly) x (-a,a)`. Scalars live at
//! cell centers, velocity components at the faces they are normal to. The
//! boundary splits into the lateral wall `S1` (four flat patches parallel to
//! the x3 axis) and the two end faces `S2(-a)`, `S2(a)`.

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Geometry and physical parameters of the cylinder problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderSpec {
    /// Half-length along x3; the domain spans (-a, a).
    pub a: f64,
    /// Cross-section side length along x1.
    pub lx: f64,
    /// Cross-section side length along x2.
    pub ly: f64,
    /// Cell counts per axis.
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    /// Kinematic viscosity.
    pub nu: f64,
    /// Slip (friction) coefficient on the lateral wall.
    pub gamma: f64,
}

impl CylinderSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.lx > 0.0 && self.ly > 0.0) {
            return Err(Error::Config(format!(
                "domain extents must be positive: a={}, lx={}, ly={}",
                self.a, self.lx, self.ly
            )));
        }
        if self.nx < 4 || self.ny < 4 || self.nz < 4 {
            return Err(Error::Config(format!(
                "resolution floor is 4 cells per axis: nx={}, ny={}, nz={}",
                self.nx, self.ny, self.nz
            )));
        }
        if !(self.nu > 0.0) {
            return Err(Error::Config(format!(
                "viscosity must be positive: nu={}",
                self.nu
            )));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::Config(format!(
                "slip coefficient must be positive: gamma={}",
                self.gamma
            )));
        }
        Ok(())
    }
}

/// One flat piece of the boundary.
///
/// `S1*` are the four lateral patches (parallel to x3), `S2Lo`/`S2Hi` the end
/// faces at x3 = -a and x3 = a.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Patch {
    S1X0,
    S1X1,
    S1Y0,
    S1Y1,
    S2Lo,
    S2Hi,
}

impl Patch {
    pub const ALL: [Patch; 6] = [
        Patch::S1X0,
        Patch::S1X1,
        Patch::S1Y0,
        Patch::S1Y1,
        Patch::S2Lo,
        Patch::S2Hi,
    ];

    pub const S1: [Patch; 4] = [Patch::S1X0, Patch::S1X1, Patch::S1Y0, Patch::S1Y1];

    pub fn is_lateral(&self) -> bool {
        !matches!(self, Patch::S2Lo | Patch::S2Hi)
    }
}

/// Outward normal and tangent frame of a boundary patch.
///
/// On the end faces the frame is the one fixed by the problem formulation:
/// n = -e3 at x3 = -a, n = e3 at x3 = a, tangents e1, e2. On the lateral
/// patches the first tangent is horizontal (e3 x n) and the second is e3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFrame {
    pub normal: [f64; 3],
    pub tangent1: [f64; 3],
    pub tangent2: [f64; 3],
}

impl BoundaryFrame {
    pub fn of(patch: Patch) -> Self {
        match patch {
            Patch::S1X0 => BoundaryFrame {
                normal: [-1.0, 0.0, 0.0],
                tangent1: [0.0, -1.0, 0.0],
                tangent2: [0.0, 0.0, 1.0],
            },
            Patch::S1X1 => BoundaryFrame {
                normal: [1.0, 0.0, 0.0],
                tangent1: [0.0, 1.0, 0.0],
                tangent2: [0.0, 0.0, 1.0],
            },
            Patch::S1Y0 => BoundaryFrame {
                normal: [0.0, -1.0, 0.0],
                tangent1: [1.0, 0.0, 0.0],
                tangent2: [0.0, 0.0, 1.0],
            },
            Patch::S1Y1 => BoundaryFrame {
                normal: [0.0, 1.0, 0.0],
                tangent1: [-1.0, 0.0, 0.0],
                tangent2: [0.0, 0.0, 1.0],
            },
            Patch::S2Lo => BoundaryFrame {
                normal: [0.0, 0.0, -1.0],
                tangent1: [1.0, 0.0, 0.0],
                tangent2: [0.0, 1.0, 0.0],
            },
            Patch::S2Hi => BoundaryFrame {
                normal: [0.0, 0.0, 1.0],
                tangent1: [1.0, 0.0, 0.0],
                tangent2: [0.0, 1.0, 0.0],
            },
        }
    }
}

/// Which set a velocity face DOF belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceClass {
    Interior,
    Boundary(Patch),
}

/// Staggered (MAC) grid over the cylinder.
///
/// Velocity DOF layout: `u` on x-normal faces `(nx+1) * ny * nz`, `v` on
/// y-normal faces `nx * (ny+1) * nz`, `w` on z-normal faces `nx * ny * (nz+1)`.
/// Scalars on the `nx * ny * nz` cells. A velocity DOF is a boundary DOF
/// exactly when its face lies in the boundary plane it is normal to, so every
/// DOF belongs to exactly one of interior, S1, S2(-a), S2(a).
#[derive(Debug, Clone, PartialEq)]
pub struct StaggeredGrid {
    pub spec: CylinderSpec,
    pub hx: f64,
    pub hy: f64,
    pub hz: f64,
}

/// Builds the grid for a validated spec. Deterministic for identical input.
pub fn build_grid(spec: CylinderSpec) -> Result<Arc<StaggeredGrid>> {
    spec.validate()?;
    Ok(Arc::new(StaggeredGrid {
        spec,
        hx: spec.lx / spec.nx as f64,
        hy: spec.ly / spec.ny as f64,
        hz: 2.0 * spec.a / spec.nz as f64,
    }))
}

impl StaggeredGrid {
    pub fn n_cells(&self) -> usize {
        self.spec.nx * self.spec.ny * self.spec.nz
    }

    pub fn n_u(&self) -> usize {
        (self.spec.nx + 1) * self.spec.ny * self.spec.nz
    }

    pub fn n_v(&self) -> usize {
        self.spec.nx * (self.spec.ny + 1) * self.spec.nz
    }

    pub fn n_w(&self) -> usize {
        self.spec.nx * self.spec.ny * (self.spec.nz + 1)
    }

    pub fn cell_volume(&self) -> f64 {
        self.hx * self.hy * self.hz
    }

    pub fn volume(&self) -> f64 {
        self.spec.lx * self.spec.ly * 2.0 * self.spec.a
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.spec.ny + j) * self.spec.nx + i
    }

    #[inline]
    pub fn uf(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.spec.ny + j) * (self.spec.nx + 1) + i
    }

    #[inline]
    pub fn vf(&self, i: usize, j: usize, k: usize) -> usize {
        (k * (self.spec.ny + 1) + j) * self.spec.nx + i
    }

    #[inline]
    pub fn wf(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.spec.ny + j) * self.spec.nx + i
    }

    /// Cell-center coordinates.
    #[inline]
    pub fn cell_center(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            (i as f64 + 0.5) * self.hx,
            (j as f64 + 0.5) * self.hy,
            -self.spec.a + (k as f64 + 0.5) * self.hz,
        ]
    }

    #[inline]
    pub fn u_face_center(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            i as f64 * self.hx,
            (j as f64 + 0.5) * self.hy,
            -self.spec.a + (k as f64 + 0.5) * self.hz,
        ]
    }

    #[inline]
    pub fn v_face_center(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            (i as f64 + 0.5) * self.hx,
            j as f64 * self.hy,
            -self.spec.a + (k as f64 + 0.5) * self.hz,
        ]
    }

    #[inline]
    pub fn w_face_center(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            (i as f64 + 0.5) * self.hx,
            (j as f64 + 0.5) * self.hy,
            -self.spec.a + k as f64 * self.hz,
        ]
    }

    pub fn classify_u(&self, i: usize) -> FaceClass {
        if i == 0 {
            FaceClass::Boundary(Patch::S1X0)
        } else if i == self.spec.nx {
            FaceClass::Boundary(Patch::S1X1)
        } else {
            FaceClass::Interior
        }
    }

    pub fn classify_v(&self, j: usize) -> FaceClass {
        if j == 0 {
            FaceClass::Boundary(Patch::S1Y0)
        } else if j == self.spec.ny {
            FaceClass::Boundary(Patch::S1Y1)
        } else {
            FaceClass::Interior
        }
    }

    pub fn classify_w(&self, k: usize) -> FaceClass {
        if k == 0 {
            FaceClass::Boundary(Patch::S2Lo)
        } else if k == self.spec.nz {
            FaceClass::Boundary(Patch::S2Hi)
        } else {
            FaceClass::Interior
        }
    }

    /// Area of one quadrature panel on the given patch.
    pub fn patch_panel_area(&self, patch: Patch) -> f64 {
        match patch {
            Patch::S1X0 | Patch::S1X1 => self.hy * self.hz,
            Patch::S1Y0 | Patch::S1Y1 => self.hx * self.hz,
            Patch::S2Lo | Patch::S2Hi => self.hx * self.hy,
        }
    }

    /// Number of quadrature panels on the given patch.
    pub fn patch_panel_count(&self, patch: Patch) -> usize {
        match patch {
            Patch::S1X0 | Patch::S1X1 => self.spec.ny * self.spec.nz,
            Patch::S1Y0 | Patch::S1Y1 => self.spec.nx * self.spec.nz,
            Patch::S2Lo | Patch::S2Hi => self.spec.nx * self.spec.ny,
        }
    }

    pub fn patch_area(&self, patch: Patch) -> f64 {
        self.patch_panel_area(patch) * self.patch_panel_count(patch) as f64
    }

    /// Distance from a point to the nearer end face, measured along x3.
    #[inline]
    pub fn end_face_distance(&self, z: f64) -> f64 {
        (self.spec.a + z).min(self.spec.a - z)
    }

    /// Same-shape check used by the field operators.
    pub fn same_shape(&self, other: &StaggeredGrid) -> bool {
        self.spec == other.spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: f64, lx: f64, ly: f64, n: (usize, usize, usize)) -> CylinderSpec {
        CylinderSpec {
            a,
            lx,
            ly,
            nx: n.0,
            ny: n.1,
            nz: n.2,
            nu: 1.0,
            gamma: 1.0,
        }
    }

    #[test]
    fn end_face_areas_match_cross_section() {
        let g = build_grid(spec(0.5, 1.0, 1.0, (8, 8, 8))).unwrap();
        assert!((g.patch_area(Patch::S2Lo) - 1.0).abs() < 1e-14);
        assert!((g.patch_area(Patch::S2Hi) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cell_sizes_follow_extents() {
        let g = build_grid(spec(1.0, 2.0, 1.0, (8, 4, 16))).unwrap();
        assert!((g.hx - 0.25).abs() < 1e-15);
        assert!((g.hy - 0.25).abs() < 1e-15);
        assert!((g.hz - 0.125).abs() < 1e-15);
    }

    #[test]
    fn too_coarse_grid_is_rejected() {
        let err = build_grid(spec(0.5, 1.0, 1.0, (2, 8, 8))).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn nonpositive_extent_is_rejected() {
        assert!(build_grid(spec(-1.0, 1.0, 1.0, (8, 8, 8))).is_err());
        assert!(build_grid(spec(0.5, 0.0, 1.0, (8, 8, 8))).is_err());
    }

    #[test]
    fn frames_are_orthonormal() {
        for patch in Patch::ALL {
            let f = BoundaryFrame::of(patch);
            let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
            assert!(dot(f.normal, f.tangent1).abs() < 1e-14);
            assert!(dot(f.normal, f.tangent2).abs() < 1e-14);
            assert!(dot(f.tangent1, f.tangent2).abs() < 1e-14);
            for v in [f.normal, f.tangent1, f.tangent2] {
                assert!((dot(v, v) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn end_face_frames_match_formulation() {
        assert_eq!(BoundaryFrame::of(Patch::S2Lo).normal, [0.0, 0.0, -1.0]);
        assert_eq!(BoundaryFrame::of(Patch::S2Hi).normal, [0.0, 0.0, 1.0]);
        assert_eq!(BoundaryFrame::of(Patch::S2Lo).tangent1, [1.0, 0.0, 0.0]);
        assert_eq!(BoundaryFrame::of(Patch::S2Hi).tangent2, [0.0, 1.0, 0.0]);
    }

    #[test]
    fn every_velocity_dof_has_exactly_one_class() {
        let g = build_grid(spec(0.5, 1.0, 1.0, (4, 5, 6))).unwrap();
        let mut interior = 0usize;
        let mut s1 = 0usize;
        let mut s2 = 0usize;
        for i in 0..=g.spec.nx {
            match g.classify_u(i) {
                FaceClass::Interior => interior += g.spec.ny * g.spec.nz,
                FaceClass::Boundary(p) if p.is_lateral() => s1 += g.spec.ny * g.spec.nz,
                FaceClass::Boundary(_) => s2 += g.spec.ny * g.spec.nz,
            }
        }
        for j in 0..=g.spec.ny {
            match g.classify_v(j) {
                FaceClass::Interior => interior += g.spec.nx * g.spec.nz,
                FaceClass::Boundary(p) if p.is_lateral() => s1 += g.spec.nx * g.spec.nz,
                FaceClass::Boundary(_) => s2 += g.spec.nx * g.spec.nz,
            }
        }
        for k in 0..=g.spec.nz {
            match g.classify_w(k) {
                FaceClass::Interior => interior += g.spec.nx * g.spec.ny,
                FaceClass::Boundary(p) if !p.is_lateral() => s2 += g.spec.nx * g.spec.ny,
                FaceClass::Boundary(_) => s1 += g.spec.nx * g.spec.ny,
            }
        }
        assert_eq!(interior + s1 + s2, g.n_u() + g.n_v() + g.n_w());
        assert_eq!(s2, 2 * g.spec.nx * g.spec.ny);
    }
}
