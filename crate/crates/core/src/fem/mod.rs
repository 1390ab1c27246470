//! P1 finite elements for the mixed Neumann, Steklov and Robin problems.

pub mod assembly;
pub mod cholesky;
pub mod eigen;
pub mod mesh;
pub mod solve;
pub mod sparse;

pub use assembly::{DiscreteProblem, assemble};
pub use eigen::{EigenMode, EigenPairs, generalized_eigensolve};
pub use mesh::{BoundaryEdge, TriMesh, triangulate};
pub use solve::{
    DiscreteEigenpair, domain_spectrum, fem_spectrum, solve, solve_dirichlet, solve_neumann, solve_neumann_dirichlet,
    solve_robin_dirichlet, solve_steklov_dirichlet,
};
pub use sparse::CsrMatrix;
