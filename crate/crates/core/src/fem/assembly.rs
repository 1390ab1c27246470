//! P1 stiffness, mass and boundary-mass matrices.

use alloc::vec::Vec;

use super::mesh::TriMesh;
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Assembled operators of one mesh. The Dirichlet mask marks vertices that
/// touch a Dirichlet edge; they are removed by row/column deletion in the solvers.
#[derive(Clone, Debug)]
pub struct DiscreteProblem {
    pub mesh: TriMesh,
    /// `int grad u . grad v`
    pub stiffness: CsrMatrix,
    /// `int u v`
    pub mass: CsrMatrix,
    /// `int_F u v` over the free (non-Dirichlet) boundary edges.
    pub boundary_mass: CsrMatrix,
    pub dirichlet: Vec<bool>,
}

/// Assembles in triangle order, so results are reproducible bit for bit.
pub fn assemble(mesh: TriMesh) -> Result<DiscreteProblem> {
    let n = mesh.vertex_count();
    let mut k = Vec::with_capacity(9 * mesh.triangles.len());
    let mut m = Vec::with_capacity(9 * mesh.triangles.len());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let area = mesh.triangle_area(t);
        if !(area > 0.0) {
            return Err(Error::DegenerateTriangle { index: t });
        }
        let g = mesh.hat_gradients(t);
        for i in 0..3 {
            for j in 0..3 {
                k.push((tri[i], tri[j], area * g[i].dot(g[j])));
                let factor = if i == j { 2.0 } else { 1.0 };
                m.push((tri[i], tri[j], area * factor / 12.0));
            }
        }
    }
    let mut b = Vec::new();
    for e in mesh.boundary_edges.iter().filter(|e| e.condition.is_free()) {
        let len = mesh.edge_length(e);
        b.push((e.a, e.a, len / 3.0));
        b.push((e.a, e.b, len / 6.0));
        b.push((e.b, e.a, len / 6.0));
        b.push((e.b, e.b, len / 3.0));
    }
    let dirichlet = mesh.dirichlet_mask();
    Ok(DiscreteProblem {
        stiffness: CsrMatrix::from_triplets(n, n, &k),
        mass: CsrMatrix::from_triplets(n, n, &m),
        boundary_mass: CsrMatrix::from_triplets(n, n, &b),
        dirichlet,
        mesh,
    })
}

impl DiscreteProblem {
    /// Vertices kept after deleting the Dirichlet ones.
    pub fn free_dofs(&self) -> Vec<usize> {
        (0..self.dirichlet.len()).filter(|&i| !self.dirichlet[i]).collect()
    }

    /// The same problem on the mesh dilated by `factor`; matrices are
    /// rescaled exactly (`K` unchanged, `M` by `factor^2`, `B_F` by `factor`).
    pub fn scaled(&self, factor: f64) -> Self {
        DiscreteProblem {
            mesh: self.mesh.scaled(factor),
            stiffness: self.stiffness.clone(),
            mass: self.mass.scaled(factor * factor),
            boundary_mass: self.boundary_mass.scaled(factor),
            dirichlet: self.dirichlet.clone(),
        }
    }
}
