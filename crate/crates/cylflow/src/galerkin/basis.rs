//! Discretely divergence-free, impermeable basis for the homogenized
//! unknown.
//!
//! Generators are the classic MAC vortex loops: for every admissible grid
//! edge, the discrete curl of the unit edge function, a four-face circulation
//! whose cell divergence telescopes to zero exactly. Loops that would touch a
//! boundary-normal face are excluded, which builds the impermeability
//! condition into the span. On a simply connected box the loops span the
//! whole null space of the divergence restricted to tangential fields;
//! rank-revealing Gram-Schmidt (two passes, deterministic generator order)
//! turns them into an orthonormal basis.

use std::sync::Arc;

use crate::domain::field::VectorField;
use crate::domain::grid::StaggeredGrid;
use crate::domain::quad::dot_mass;
use crate::error::{Error, Result};

/// One loop generator: up to four (component, index, value) face entries.
#[derive(Debug, Clone)]
pub struct LoopGenerator {
    pub entries: [(usize, usize, f64); 4],
}

impl LoopGenerator {
    fn materialize(&self, grid: &Arc<StaggeredGrid>) -> VectorField {
        let mut f = VectorField::zeros(grid);
        for (comp, idx, val) in self.entries {
            match comp {
                0 => f.u[idx] += val,
                1 => f.v[idx] += val,
                _ => f.w[idx] += val,
            }
        }
        f
    }
}

/// All vortex-loop generators in deterministic order: x-edges, then y-edges,
/// then z-edges, lexicographic in (k, j, i) within each family.
pub fn loop_generators(grid: &StaggeredGrid) -> Vec<LoopGenerator> {
    let s = grid.spec;
    let mut gens = Vec::new();

    // x-edges at (cell i, node j, node k): circulation in the (y,z) plane.
    for k in 1..s.nz {
        for j in 1..s.ny {
            for i in 0..s.nx {
                gens.push(LoopGenerator {
                    entries: [
                        (1, grid.vf(i, j, k - 1), grid.hy),
                        (1, grid.vf(i, j, k), -grid.hy),
                        (2, grid.wf(i, j - 1, k), -grid.hz),
                        (2, grid.wf(i, j, k), grid.hz),
                    ],
                });
            }
        }
    }
    // y-edges at (node i, cell j, node k): circulation in the (z,x) plane.
    for k in 1..s.nz {
        for j in 0..s.ny {
            for i in 1..s.nx {
                gens.push(LoopGenerator {
                    entries: [
                        (2, grid.wf(i - 1, j, k), grid.hz),
                        (2, grid.wf(i, j, k), -grid.hz),
                        (0, grid.uf(i, j, k - 1), -grid.hx),
                        (0, grid.uf(i, j, k), grid.hx),
                    ],
                });
            }
        }
    }
    // z-edges at (node i, node j, cell k): circulation in the (x,y) plane.
    for k in 0..s.nz {
        for j in 1..s.ny {
            for i in 1..s.nx {
                gens.push(LoopGenerator {
                    entries: [
                        (0, grid.uf(i, j - 1, k), grid.hx),
                        (0, grid.uf(i, j, k), -grid.hx),
                        (1, grid.vf(i - 1, j, k), -grid.hy),
                        (1, grid.vf(i, j, k), grid.hy),
                    ],
                });
            }
        }
    }
    gens
}

/// Dimension of the discrete null space: tangential interior face DOFs minus
/// the rank of the divergence on them (`n_cells - 1` for a connected grid).
pub fn null_space_dimension(grid: &StaggeredGrid) -> usize {
    let s = grid.spec;
    let interior_faces =
        (s.nx - 1) * s.ny * s.nz + s.nx * (s.ny - 1) * s.nz + s.nx * s.ny * (s.nz - 1);
    interior_faces - (grid.n_cells() - 1)
}

/// Orthonormal divergence-free basis.
#[derive(Debug, Clone)]
pub struct GalerkinBasis {
    pub grid: Arc<StaggeredGrid>,
    pub vectors: Vec<VectorField>,
}

impl GalerkinBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Reassembles the field `sum_k c_k a^k`.
    pub fn synthesize(&self, coeffs: &[f64]) -> VectorField {
        let mut out = VectorField::zeros(&self.grid);
        for (c, a) in coeffs.iter().zip(&self.vectors) {
            if *c != 0.0 {
                out.axpy(*c, a);
            }
        }
        out
    }

    /// Mass inner products of a covector field against every basis vector.
    /// For a plain covector (already mass-weighted) use
    /// [`GalerkinBasis::dot_plain_all`].
    pub fn dot_mass_all(&self, field: &VectorField) -> Vec<f64> {
        self.vectors.iter().map(|a| dot_mass(field, a)).collect()
    }

    pub fn dot_plain_all(&self, covector: &VectorField) -> Vec<f64> {
        self.vectors
            .iter()
            .map(|a| crate::galerkin::forms::dot_plain(covector, a))
            .collect()
    }
}

const DROP_TOL: f64 = 1e-8;

/// Builds the orthonormal basis, `n = None` for the full null space.
///
/// Rank-revealing modified Gram-Schmidt over the loop generators with
/// re-orthogonalization; generators that lose all but `DROP_TOL` of their
/// mass are dependent and get skipped.
pub fn build_divfree_basis(grid: &Arc<StaggeredGrid>, n: Option<usize>) -> Result<GalerkinBasis> {
    let capacity = null_space_dimension(grid);
    let target = n.unwrap_or(capacity);
    if target > capacity {
        return Err(Error::Capacity {
            requested: target,
            max: capacity,
        });
    }

    let gens = loop_generators(grid);
    let mut basis: Vec<VectorField> = Vec::with_capacity(target);
    for gen in &gens {
        if basis.len() == target {
            break;
        }
        let mut x = gen.materialize(grid);
        let norm0 = dot_mass(&x, &x).sqrt();
        for _pass in 0..2 {
            for b in &basis {
                let c = dot_mass(&x, b);
                if c != 0.0 {
                    x.axpy(-c, b);
                }
            }
        }
        let nrm = dot_mass(&x, &x).sqrt();
        if nrm <= DROP_TOL * norm0 {
            continue;
        }
        x.scale(1.0 / nrm);
        basis.push(x);
    }

    if basis.len() < target {
        return Err(Error::Capacity {
            requested: target,
            max: basis.len(),
        });
    }

    Ok(GalerkinBasis {
        grid: Arc::clone(grid),
        vectors: basis,
    })
}

/// Dense row-echelon rank with partial pivoting; the independent oracle for
/// the null-space dimension check.
pub fn dense_rank(mut rows: Vec<Vec<f64>>, tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < rows.len() && col < ncols {
        let (imax, vmax) = rows[rank..]
            .iter()
            .enumerate()
            .map(|(i, r)| (i + rank, r[col].abs()))
            .fold((rank, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if vmax <= tol {
            col += 1;
            continue;
        }
        rows.swap(rank, imax);
        let pivot = rows[rank][col];
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0.0 {
                let factor = rows[i][col] / pivot;
                for c in col..ncols {
                    let sub = factor * rows[rank][c];
                    rows[i][c] -= sub;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}
