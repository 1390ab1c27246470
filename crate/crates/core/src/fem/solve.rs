use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::assembly::{DiscreteProblem, assemble};
use super::eigen::{EigenMode, generalized_eigensolve};
use super::mesh::triangulate;
use super::sparse::CsrMatrix;
use crate::closed_form::{EigenSequence, ProblemKind, Provenance};
use crate::error::{Error, Result};
use crate::geometry::DomainSpec;

/// One computed eigenpair, prolonged to all mesh vertices (zero on
/// eliminated Dirichlet vertices).
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteEigenpair {
    pub eigenvalue: f64,
    pub vector: Vec<f64>,
    pub kind: ProblemKind,
    /// Whether the returned vectors are orthonormal in the pencil's
    /// right-hand matrix (`M`, or `B_F` for Steklov) to 1e-8.
    pub b_orthonormal: bool,
    /// `||A x - theta B x||` on the reduced pencil.
    pub residual: f64,
}

fn solve_reduced(
    problem: &DiscreteProblem,
    kind: ProblemKind,
    keep: &[usize],
    a: &CsrMatrix,
    b: &CsrMatrix,
    count: usize,
    mode: EigenMode,
) -> Result<Vec<DiscreteEigenpair>> {
    let (a, b) = (a.submatrix(keep, keep), b.submatrix(keep, keep));
    let pairs = generalized_eigensolve(&a, &b, count, mode)?;
    let mut orthonormal = true;
    for i in 0..pairs.len() {
        let bx = b.mul_vec(&pairs.vectors[i]);
        for j in 0..pairs.len() {
            let g: f64 = pairs.vectors[j].iter().zip(&bx).map(|(u, v)| u * v).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            orthonormal &= libm::fabs(g - target) <= 1e-8;
        }
    }
    let n = problem.mesh.vertex_count();
    Ok(pairs
        .values
        .iter()
        .zip(&pairs.vectors)
        .zip(&pairs.residuals)
        .map(|((&eigenvalue, x), &residual)| {
            let mut vector = vec![0.0; n];
            for (&i, v) in keep.iter().zip(x) {
                vector[i] = *v;
            }
            DiscreteEigenpair {
                eigenvalue,
                vector,
                kind,
                b_orthonormal: orthonormal,
                residual,
            }
        })
        .collect())
}

/// `K x = mu M x` with the Dirichlet vertices deleted.
pub fn solve_neumann_dirichlet(problem: &DiscreteProblem, count: usize) -> Result<Vec<DiscreteEigenpair>> {
    let keep = problem.free_dofs();
    solve_reduced(
        problem,
        ProblemKind::NeumannDirichlet,
        &keep,
        &problem.stiffness,
        &problem.mass,
        count,
        EigenMode::Mass,
    )
}

/// `S x = sigma B_F x` on the free boundary vertices, with `S` the Schur
/// complement of the stiffness matrix after Dirichlet elimination.
pub fn solve_steklov_dirichlet(problem: &DiscreteProblem, count: usize) -> Result<Vec<DiscreteEigenpair>> {
    if !problem.mesh.boundary_edges.iter().any(|e| e.condition.is_free()) {
        return Err(Error::NoSteklovBoundary);
    }
    let keep = problem.free_dofs();
    solve_reduced(
        problem,
        ProblemKind::SteklovDirichlet,
        &keep,
        &problem.stiffness,
        &problem.boundary_mass,
        count,
        EigenMode::Boundary,
    )
}

/// `(K + alpha B_F) x = lambda M x` with the Dirichlet vertices deleted.
pub fn solve_robin_dirichlet(problem: &DiscreteProblem, alpha: f64, count: usize) -> Result<Vec<DiscreteEigenpair>> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} must be >= 0")));
    }
    let keep = problem.free_dofs();
    let a = problem.stiffness.add_scaled(&problem.boundary_mass, alpha);
    solve_reduced(
        problem,
        ProblemKind::RobinDirichlet { alpha },
        &keep,
        &a,
        &problem.mass,
        count,
        EigenMode::Mass,
    )
}

/// Every boundary vertex deleted, whatever the labels.
pub fn solve_dirichlet(problem: &DiscreteProblem, count: usize) -> Result<Vec<DiscreteEigenpair>> {
    let boundary = problem.mesh.boundary_mask();
    let keep: Vec<usize> = (0..boundary.len()).filter(|&i| !boundary[i]).collect();
    solve_reduced(problem, ProblemKind::Dirichlet, &keep, &problem.stiffness, &problem.mass, count, EigenMode::Mass)
}

/// No vertex deleted, whatever the labels.
pub fn solve_neumann(problem: &DiscreteProblem, count: usize) -> Result<Vec<DiscreteEigenpair>> {
    let keep: Vec<usize> = (0..problem.mesh.vertex_count()).collect();
    solve_reduced(problem, ProblemKind::Neumann, &keep, &problem.stiffness, &problem.mass, count, EigenMode::Mass)
}

pub fn solve(problem: &DiscreteProblem, kind: ProblemKind, count: usize) -> Result<Vec<DiscreteEigenpair>> {
    match kind {
        ProblemKind::NeumannDirichlet => solve_neumann_dirichlet(problem, count),
        ProblemKind::SteklovDirichlet => solve_steklov_dirichlet(problem, count),
        ProblemKind::RobinDirichlet { alpha } => solve_robin_dirichlet(problem, alpha, count),
        ProblemKind::Dirichlet => solve_dirichlet(problem, count),
        ProblemKind::Neumann => solve_neumann(problem, count),
    }
}

/// Eigenvalues of `kind` on an assembled problem, labelled by position.
pub fn fem_spectrum(problem: &DiscreteProblem, kind: ProblemKind, count: usize) -> Result<EigenSequence> {
    let values: Vec<f64> = solve(problem, kind, count)?.into_iter().map(|p| p.eigenvalue).collect();
    Ok(EigenSequence::from_values(kind, Provenance::Fem { h: problem.mesh.h }, &values))
}

/// Meshes, assembles and solves in one step.
pub fn domain_spectrum(domain: &DomainSpec, kind: ProblemKind, h: f64, count: usize) -> Result<EigenSequence> {
    let problem = assemble(triangulate(domain, h)?)?;
    fem_spectrum(&problem, kind, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoundaryCondition::*;
    use core::f64::consts::PI;

    fn square(conditions: [crate::geometry::BoundaryCondition; 4], h: f64) -> DiscreteProblem {
        assemble(triangulate(&DomainSpec::unit_square(conditions), h).unwrap()).unwrap()
    }

    #[test]
    fn neumann_dirichlet_square() {
        let p = square([Dirichlet, Neumann, Dirichlet, Neumann], 1.0 / 32.0);
        let pairs = solve_neumann_dirichlet(&p, 3).unwrap();
        assert!(((pairs[0].eigenvalue - PI * PI) / (PI * PI)).abs() < 0.01);
        assert!(pairs.iter().all(|e| e.b_orthonormal));
        // eliminated vertices carry zeros
        for (i, &d) in p.dirichlet.iter().enumerate() {
            if d {
                assert_eq!(pairs[0].vector[i], 0.0);
            }
        }
    }

    #[test]
    fn pure_neumann_and_pure_dirichlet() {
        let n = square([Neumann; 4], 1.0 / 16.0);
        assert!(solve_neumann_dirichlet(&n, 1).unwrap()[0].eigenvalue.abs() < 1e-10);
        let d = square([Dirichlet; 4], 1.0 / 32.0);
        let mu = solve_neumann_dirichlet(&d, 1).unwrap()[0].eigenvalue;
        assert!(((mu - 2.0 * PI * PI) / (2.0 * PI * PI)).abs() < 0.01);
    }

    #[test]
    fn steklov_square() {
        let p = square([Dirichlet, Steklov, Dirichlet, Steklov], 1.0 / 32.0);
        let s = solve_steklov_dirichlet(&p, 2).unwrap();
        let exact = PI * libm::tanh(PI / 2.0);
        assert!(((s[0].eigenvalue - exact) / exact).abs() < 0.02);
        assert!(s[0].eigenvalue < s[1].eigenvalue);
        let none = square([Dirichlet; 4], 0.25);
        assert!(matches!(solve_steklov_dirichlet(&none, 1), Err(Error::NoSteklovBoundary)));
    }

    #[test]
    fn robin_zero_equals_neumann_dirichlet() {
        let p = square([Dirichlet, Robin, Dirichlet, Robin], 1.0 / 8.0);
        let a = solve_robin_dirichlet(&p, 0.0, 4).unwrap();
        let b = solve_neumann_dirichlet(&p, 4).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.eigenvalue, y.eigenvalue);
        }
        assert!(solve_robin_dirichlet(&p, -1.0, 1).is_err());
    }

    #[test]
    fn count_checks() {
        let p = square([Dirichlet, Neumann, Dirichlet, Neumann], 0.5);
        assert!(matches!(solve_neumann_dirichlet(&p, 4), Err(Error::CountExceedsDimension { .. })));
        assert!(solve_neumann_dirichlet(&p, 0).is_err());
    }

    #[test]
    fn pure_steklov_disk_has_zero_mode() {
        let d = DomainSpec::disk(1.0, Steklov).unwrap();
        let p = assemble(triangulate(&d, 0.2).unwrap()).unwrap();
        let s = solve_steklov_dirichlet(&p, 3).unwrap();
        assert!(s[0].eigenvalue.abs() < 1e-10);
        assert!((s[1].eigenvalue - 1.0).abs() < 0.05);
        assert!((s[1].eigenvalue - s[2].eigenvalue).abs() < 1e-6);
    }
}
