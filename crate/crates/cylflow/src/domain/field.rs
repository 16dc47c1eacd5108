//! Discrete fields over the staggered grid.

use std::sync::Arc;

use crate::domain::grid::{Patch, StaggeredGrid};
use crate::error::{Error, Result};

/// Cell-centered scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: Arc<StaggeredGrid>,
    pub data: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &Arc<StaggeredGrid>) -> Self {
        ScalarField {
            grid: Arc::clone(grid),
            data: vec![0.0; grid.n_cells()],
        }
    }

    /// Samples `f(x1, x2, x3)` at cell centers.
    pub fn from_fn(grid: &Arc<StaggeredGrid>, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        let s = grid.spec;
        let mut data = vec![0.0; grid.n_cells()];
        for k in 0..s.nz {
            for j in 0..s.ny {
                for i in 0..s.nx {
                    let [x, y, z] = grid.cell_center(i, j, k);
                    data[grid.cell(i, j, k)] = f(x, y, z);
                }
            }
        }
        ScalarField {
            grid: Arc::clone(grid),
            data,
        }
    }

    pub fn assert_finite(&self, what: &str) -> Result<()> {
        if self.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data(format!("non-finite value in {what}")));
        }
        Ok(())
    }

    pub fn check_same_grid(&self, grid: &StaggeredGrid) -> Result<()> {
        if !self.grid.same_shape(grid) {
            return Err(Error::Shape("scalar field grid mismatch".into()));
        }
        Ok(())
    }

    pub fn scale(&mut self, c: f64) {
        for v in &mut self.data {
            *v *= c;
        }
    }
}

/// Face-centered velocity field: `u` on x-normal faces, `v` on y-normal,
/// `w` on z-normal faces, boundary faces included.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub grid: Arc<StaggeredGrid>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

impl VectorField {
    pub fn zeros(grid: &Arc<StaggeredGrid>) -> Self {
        VectorField {
            grid: Arc::clone(grid),
            u: vec![0.0; grid.n_u()],
            v: vec![0.0; grid.n_v()],
            w: vec![0.0; grid.n_w()],
        }
    }

    /// Samples an analytic velocity `(f1, f2, f3)` component-wise at the
    /// matching face centers.
    pub fn from_fn(grid: &Arc<StaggeredGrid>, f: impl Fn(f64, f64, f64) -> [f64; 3]) -> Self {
        let s = grid.spec;
        let mut out = VectorField::zeros(grid);
        for k in 0..s.nz {
            for j in 0..s.ny {
                for i in 0..=s.nx {
                    let [x, y, z] = grid.u_face_center(i, j, k);
                    out.u[grid.uf(i, j, k)] = f(x, y, z)[0];
                }
            }
        }
        for k in 0..s.nz {
            for j in 0..=s.ny {
                for i in 0..s.nx {
                    let [x, y, z] = grid.v_face_center(i, j, k);
                    out.v[grid.vf(i, j, k)] = f(x, y, z)[1];
                }
            }
        }
        for k in 0..=s.nz {
            for j in 0..s.ny {
                for i in 0..s.nx {
                    let [x, y, z] = grid.w_face_center(i, j, k);
                    out.w[grid.wf(i, j, k)] = f(x, y, z)[2];
                }
            }
        }
        out
    }

    pub fn check_same_grid(&self, grid: &StaggeredGrid) -> Result<()> {
        if !self.grid.same_shape(grid) {
            return Err(Error::Shape("vector field grid mismatch".into()));
        }
        Ok(())
    }

    pub fn assert_finite(&self, what: &str) -> Result<()> {
        let bad = self
            .u
            .iter()
            .chain(&self.v)
            .chain(&self.w)
            .any(|v| !v.is_finite());
        if bad {
            return Err(Error::Data(format!("non-finite value in {what}")));
        }
        Ok(())
    }

    pub fn scale(&mut self, c: f64) {
        for v in self.u.iter_mut().chain(&mut self.v).chain(&mut self.w) {
            *v *= c;
        }
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: f64, other: &VectorField) {
        for (a, b) in self.u.iter_mut().zip(&other.u) {
            *a += c * b;
        }
        for (a, b) in self.v.iter_mut().zip(&other.v) {
            *a += c * b;
        }
        for (a, b) in self.w.iter_mut().zip(&other.w) {
            *a += c * b;
        }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        let mut out = self.clone();
        out.axpy(1.0, other);
        out
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    /// Zeros the boundary-normal DOFs (the data slots of the homogenized
    /// unknown).
    pub fn clear_boundary_normals(&mut self) {
        let s = self.grid.spec;
        let g = Arc::clone(&self.grid);
        for k in 0..s.nz {
            for j in 0..s.ny {
                self.u[g.uf(0, j, k)] = 0.0;
                self.u[g.uf(s.nx, j, k)] = 0.0;
            }
        }
        for k in 0..s.nz {
            for i in 0..s.nx {
                self.v[g.vf(i, 0, k)] = 0.0;
                self.v[g.vf(i, s.ny, k)] = 0.0;
            }
        }
        for j in 0..s.ny {
            for i in 0..s.nx {
                self.w[g.wf(i, j, 0)] = 0.0;
                self.w[g.wf(i, j, s.nz)] = 0.0;
            }
        }
    }

    /// Normal component `v . n` on a patch, one value per quadrature panel.
    ///
    /// Panels coincide with the boundary-normal face DOFs, so this is a direct
    /// read with the outward-normal sign applied.
    pub fn normal_trace(&self, patch: Patch) -> Vec<f64> {
        let g = &self.grid;
        let s = g.spec;
        match patch {
            Patch::S2Lo => {
                let mut out = vec![0.0; s.nx * s.ny];
                for j in 0..s.ny {
                    for i in 0..s.nx {
                        out[j * s.nx + i] = -self.w[g.wf(i, j, 0)];
                    }
                }
                out
            }
            Patch::S2Hi => {
                let mut out = vec![0.0; s.nx * s.ny];
                for j in 0..s.ny {
                    for i in 0..s.nx {
                        out[j * s.nx + i] = self.w[g.wf(i, j, s.nz)];
                    }
                }
                out
            }
            Patch::S1X0 => {
                let mut out = vec![0.0; s.ny * s.nz];
                for k in 0..s.nz {
                    for j in 0..s.ny {
                        out[k * s.ny + j] = -self.u[g.uf(0, j, k)];
                    }
                }
                out
            }
            Patch::S1X1 => {
                let mut out = vec![0.0; s.ny * s.nz];
                for k in 0..s.nz {
                    for j in 0..s.ny {
                        out[k * s.ny + j] = self.u[g.uf(s.nx, j, k)];
                    }
                }
                out
            }
            Patch::S1Y0 => {
                let mut out = vec![0.0; s.nx * s.nz];
                for k in 0..s.nz {
                    for i in 0..s.nx {
                        out[k * s.nx + i] = -self.v[g.vf(i, 0, k)];
                    }
                }
                out
            }
            Patch::S1Y1 => {
                let mut out = vec![0.0; s.nx * s.nz];
                for k in 0..s.nz {
                    for i in 0..s.nx {
                        out[k * s.nx + i] = self.v[g.vf(i, s.ny, k)];
                    }
                }
                out
            }
        }
    }
}

/// Scalar profile on a cross-section (an end-face field), sampled at the
/// `nx * ny` panel centers shared by the S2 patches and the w-face columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceProfile {
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<f64>,
}

impl FaceProfile {
    pub fn zeros(grid: &StaggeredGrid) -> Self {
        FaceProfile {
            nx: grid.spec.nx,
            ny: grid.spec.ny,
            data: vec![0.0; grid.spec.nx * grid.spec.ny],
        }
    }

    pub fn from_fn(grid: &StaggeredGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let s = grid.spec;
        let mut data = vec![0.0; s.nx * s.ny];
        for j in 0..s.ny {
            for i in 0..s.nx {
                let x = (i as f64 + 0.5) * grid.hx;
                let y = (j as f64 + 0.5) * grid.hy;
                data[j * s.nx + i] = f(x, y);
            }
        }
        FaceProfile {
            nx: s.nx,
            ny: s.ny,
            data,
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.nx + i]
    }

    pub fn scale(&mut self, c: f64) {
        for v in &mut self.data {
            *v *= c;
        }
    }
}
