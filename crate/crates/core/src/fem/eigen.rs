//! Smallest eigenpairs of symmetric pencils `A x = theta B x`.
//!
//! Small pencils are reduced to a standard symmetric problem through the
//! Cholesky factor of `B`. Larger ones use subspace iteration on the
//! shift-inverted operator `(A - s B)^{-1} B` with a Rayleigh-Ritz step
//! every sweep. Pencils whose `B` is only semidefinite (boundary mass) are
//! first reduced to the support of `B` by a Schur complement.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cholesky::SkylineCholesky;
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Pencils up to this dimension are solved densely.
pub const DENSE_LIMIT: usize = 600;
/// Relative residual `||A x - theta B x|| / ||A x||` required of every pair.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;
const MAX_SWEEPS: usize = 2000;
const SEED: u64 = 0x006d_6978_7370_6563;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenMode {
    /// `B` positive definite.
    Mass,
    /// `B` positive semidefinite; only eigenvalues on its support are finite.
    Boundary,
}

/// Eigenvalues in increasing order with `B`-orthonormal eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// `||A x - theta B x||` for each pair.
    pub residuals: Vec<f64>,
}

impl EigenPairs {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn norm(x: &[f64]) -> f64 {
    libm::sqrt(x.iter().map(|v| v * v).sum())
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Residual test with an absolute floor for (near) zero eigenvalues.
fn accepted(residual: f64, ax: f64, theta_bx: f64, floor: f64) -> bool {
    residual <= RESIDUAL_TOLERANCE * ax.max(theta_bx) + floor
}

fn check_count(count: usize, dimension: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidArgument("eigenpair count must be at least 1".into()));
    }
    if count > dimension {
        return Err(Error::CountExceedsDimension { count, dimension });
    }
    Ok(())
}

/// The `count` smallest eigenpairs of `A x = theta B x`.
pub fn generalized_eigensolve(a: &CsrMatrix, b: &CsrMatrix, count: usize, mode: EigenMode) -> Result<EigenPairs> {
    let n = a.rows();
    if a.cols() != n || b.rows() != n || b.cols() != n {
        return Err(Error::InvalidArgument(format!(
            "pencil shapes {}x{} and {}x{} differ",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    match mode {
        EigenMode::Boundary => boundary_eigensolve(a, b, count),
        EigenMode::Mass => {
            check_count(count, n)?;
            let block = (2 * count).max(count + 8).min(n);
            if n <= DENSE_LIMIT || 2 * block >= n {
                dense_generalized_eigensolve(&a.to_dense(), &b.to_dense(), count)
            } else {
                subspace_iteration(a, b, count, block)
            }
        }
    }
}

/// Dense path: `B = L L^T`, then the symmetric eigenproblem of `L^{-1} A L^{-T}`.
pub fn dense_generalized_eigensolve(a: &DMatrix<f64>, b: &DMatrix<f64>, count: usize) -> Result<EigenPairs> {
    let n = a.nrows();
    check_count(count, n)?;
    let chol = b.clone().cholesky().ok_or(Error::FactorizationFailure { pivot: 0 })?;
    let l = chol.l();
    let linv_a = l.solve_lower_triangular(a).ok_or(Error::FactorizationFailure { pivot: 0 })?;
    let c = l
        .solve_lower_triangular(&linv_a.transpose())
        .ok_or(Error::FactorizationFailure { pivot: 0 })?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let lt = l.transpose();
    let a_norm = a.abs().row_sum().max();
    let mut pairs = EigenPairs {
        values: Vec::with_capacity(count),
        vectors: Vec::with_capacity(count),
        residuals: Vec::with_capacity(count),
    };
    for &i in order.iter().take(count) {
        let y: DVector<f64> = eig.eigenvectors.column(i).into_owned();
        let x = lt.solve_upper_triangular(&y).ok_or(Error::FactorizationFailure { pivot: 0 })?;
        let theta = eig.eigenvalues[i];
        let ax = a * &x;
        let bx = b * &x;
        let residual = (&ax - &bx * theta).norm();
        let floor = 1e-12 * a_norm * x.norm();
        if !accepted(residual, ax.norm(), libm::fabs(theta) * bx.norm(), floor) {
            return Err(Error::NonConvergence { residual });
        }
        pairs.values.push(theta);
        pairs.vectors.push(x.iter().copied().collect());
        pairs.residuals.push(residual);
    }
    Ok(pairs)
}

/// `B`-orthonormalizes `cols` in place by two passes of modified
/// Gram-Schmidt; returns the `B`-images of the columns. Columns that
/// collapse are replaced by fresh random vectors.
fn b_orthonormalize(cols: &mut [Vec<f64>], b: &CsrMatrix, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut images: Vec<Vec<f64>> = Vec::with_capacity(cols.len());
    for j in 0..cols.len() {
        let mut attempts = 0;
        loop {
            let before = libm::sqrt(b.bilinear(&cols[j], &cols[j]).max(0.0));
            let (done, rest) = cols.split_at_mut(j);
            let col = &mut rest[0];
            for _ in 0..2 {
                for (q, bq) in done.iter().zip(&images) {
                    let c = dot(bq, col);
                    for (x, qi) in col.iter_mut().zip(q) {
                        *x -= c * qi;
                    }
                }
            }
            let bx = b.mul_vec(&cols[j]);
            let after = libm::sqrt(dot(&cols[j], &bx).max(0.0));
            if after > 1e-10 * before && after > 0.0 {
                let inv = 1.0 / after;
                cols[j].iter_mut().for_each(|x| *x *= inv);
                images.push(bx.into_iter().map(|x| x * inv).collect());
                break;
            }
            attempts += 1;
            assert!(attempts < 20, "could not extend the B-orthonormal basis");
            cols[j] = random_vector(cols[j].len(), rng);
        }
    }
    images
}

fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn subspace_iteration(a: &CsrMatrix, b: &CsrMatrix, count: usize, block: usize) -> Result<EigenPairs> {
    let n = a.rows();
    let (ad, bd) = (a.diagonal(), b.diagonal());
    let ratio = ad
        .iter()
        .zip(&bd)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| x / y)
        .fold(f64::INFINITY, f64::min);
    let shift = if ratio.is_finite() { -1e-3 * ratio } else { -1.0 };
    let factor = SkylineCholesky::factor(&a.add_scaled(b, -shift))?;
    let a_norm = a.norm_inf();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut x: Vec<Vec<f64>> = (0..block).map(|_| random_vector(n, &mut rng)).collect();
    let mut worst = f64::INFINITY;
    for _ in 0..MAX_SWEEPS {
        let mut q: Vec<Vec<f64>> = x.iter().map(|col| factor.solve(&b.mul_vec(col))).collect();
        let bq = b_orthonormalize(&mut q, b, &mut rng);
        let aq: Vec<Vec<f64>> = q.iter().map(|col| a.mul_vec(col)).collect();
        let h = DMatrix::from_fn(block, block, |i, j| 0.5 * (dot(&q[i], &aq[j]) + dot(&q[j], &aq[i])));
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let combine = |basis: &[Vec<f64>], k: usize| -> Vec<f64> {
            let mut out = vec![0.0; n];
            for (c, col) in eig.eigenvectors.column(k).iter().zip(basis) {
                for (o, v) in out.iter_mut().zip(col) {
                    *o += c * v;
                }
            }
            out
        };
        let mut values = Vec::with_capacity(block);
        let mut next = Vec::with_capacity(block);
        let mut residuals = Vec::with_capacity(count);
        let mut converged = true;
        worst = 0.0;
        for (rank, &k) in order.iter().enumerate() {
            let theta = eig.eigenvalues[k];
            let xk = combine(&q, k);
            if rank < count {
                let (axk, bxk) = (combine(&aq, k), combine(&bq, k));
                let r: Vec<f64> = axk.iter().zip(&bxk).map(|(u, v)| u - theta * v).collect();
                let residual = norm(&r);
                let floor = 1e-12 * a_norm * norm(&xk);
                if !accepted(residual, norm(&axk), libm::fabs(theta) * norm(&bxk), floor) {
                    converged = false;
                }
                worst = worst.max(residual / norm(&axk).max(floor));
                residuals.push(residual);
            }
            values.push(theta);
            next.push(xk);
        }
        if converged {
            next.truncate(count);
            values.truncate(count);
            return Ok(EigenPairs {
                values,
                vectors: next,
                residuals,
            });
        }
        x = next;
    }
    Err(Error::NonConvergence { residual: worst })
}

/// Reduces `A x = theta B x` to the support of `B` via
/// `S = A_bb - A_bi A_ii^{-1} A_ib` and solves the dense pencil `(S, B_bb)`.
/// Eigenvectors are extended harmonically: `x_i = -A_ii^{-1} A_ib x_b`.
fn boundary_eigensolve(a: &CsrMatrix, b: &CsrMatrix, count: usize) -> Result<EigenPairs> {
    let n = a.rows();
    let bd = b.diagonal();
    let support: Vec<usize> = (0..n).filter(|&i| bd[i] > 0.0).collect();
    let rest: Vec<usize> = (0..n).filter(|&i| !(bd[i] > 0.0)).collect();
    if support.is_empty() {
        return Err(Error::NoSteklovBoundary);
    }
    check_count(count, support.len())?;
    let a_bb = a.submatrix(&support, &support).to_dense();
    let b_bb = b.submatrix(&support, &support).to_dense();
    let a_ib = a.submatrix(&rest, &support);
    let interior = if rest.is_empty() {
        None
    } else {
        Some(SkylineCholesky::factor(&a.submatrix(&rest, &rest))?)
    };
    // Columns of A_ii^{-1} A_ib.
    let mut harmonic: Vec<Vec<f64>> = Vec::with_capacity(support.len());
    let mut s = a_bb;
    if let Some(factor) = &interior {
        let a_ib_dense = a_ib.to_dense();
        for j in 0..support.len() {
            let col: Vec<f64> = a_ib_dense.column(j).iter().copied().collect();
            let z = factor.solve(&col);
            for i in 0..support.len() {
                // (A_bi z)_i = sum over interior k of A_ki z_k by symmetry
                s[(i, j)] -= a_ib_dense.column(i).iter().zip(&z).map(|(u, v)| u * v).sum::<f64>();
            }
            harmonic.push(z);
        }
    }
    let s = (&s + s.transpose()) * 0.5;
    let reduced = dense_generalized_eigensolve(&s, &b_bb, count)?;
    let a_norm = a.norm_inf();
    let mut pairs = EigenPairs {
        values: reduced.values.clone(),
        vectors: Vec::with_capacity(count),
        residuals: Vec::with_capacity(count),
    };
    for (theta, xb) in reduced.values.iter().zip(&reduced.vectors) {
        let mut x = vec![0.0; n];
        for (&i, v) in support.iter().zip(xb) {
            x[i] = *v;
        }
        for (k, &i) in rest.iter().enumerate() {
            x[i] = -harmonic.iter().zip(xb).map(|(z, v)| z[k] * v).sum::<f64>();
        }
        let (ax, bx) = (a.mul_vec(&x), b.mul_vec(&x));
        let r: Vec<f64> = ax.iter().zip(&bx).map(|(u, v)| u - theta * v).collect();
        let residual = norm(&r);
        let floor = 1e-12 * a_norm * norm(&x);
        if !accepted(residual, norm(&ax), libm::fabs(*theta) * norm(&bx), floor) {
            return Err(Error::NonConvergence { residual });
        }
        pairs.vectors.push(x);
        pairs.residuals.push(residual);
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sparse(rows: &[&[f64]]) -> CsrMatrix {
        let n = rows.len();
        CsrMatrix::from_dense(&DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    #[test]
    fn small_examples() {
        let id = CsrMatrix::identity(2);
        let p = generalized_eigensolve(&sparse(&[&[1.0, 0.0], &[0.0, 2.0]]), &id, 2, EigenMode::Mass).unwrap();
        assert!((p.values[0] - 1.0).abs() < 1e-14 && (p.values[1] - 2.0).abs() < 1e-14);
        let p = generalized_eigensolve(&sparse(&[&[2.0, -1.0], &[-1.0, 2.0]]), &id, 2, EigenMode::Mass).unwrap();
        assert!((p.values[0] - 1.0).abs() < 1e-14 && (p.values[1] - 3.0).abs() < 1e-14);
        assert!(matches!(
            generalized_eigensolve(&id, &id, 3, EigenMode::Mass),
            Err(Error::CountExceedsDimension { count: 3, dimension: 2 })
        ));
        assert!(generalized_eigensolve(&id, &id, 0, EigenMode::Mass).is_err());
    }

    /// 1D Dirichlet Laplacian with lumped mass: eigenvalues
    /// `(2 - 2 cos(k pi / (n + 1)))` in closed form.
    #[test]
    fn subspace_iteration_matches_closed_form() {
        let n = 900;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, &t);
        let b = CsrMatrix::identity(n);
        let p = generalized_eigensolve(&a, &b, 4, EigenMode::Mass).unwrap();
        for k in 0..4 {
            let exact = 2.0 - 2.0 * libm::cos((k + 1) as f64 * core::f64::consts::PI / (n + 1) as f64);
            assert!(((p.values[k] - exact) / exact).abs() < 1e-9, "{k}: {} vs {exact}", p.values[k]);
            for j in 0..4 {
                let g = b.bilinear(&p.vectors[k], &p.vectors[j]);
                assert!((g - if j == k { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn dense_and_sparse_paths_agree() {
        // 2D grid Laplacian with a varying diagonal mass
        let m = 26;
        let n = m * m;
        let id = |i: usize, j: usize| i * m + j;
        let mut t = Vec::new();
        for i in 0..m {
            for j in 0..m {
                t.push((id(i, j), id(i, j), 4.0));
                if i + 1 < m {
                    t.push((id(i, j), id(i + 1, j), -1.0));
                    t.push((id(i + 1, j), id(i, j), -1.0));
                }
                if j + 1 < m {
                    t.push((id(i, j), id(i, j + 1), -1.0));
                    t.push((id(i, j + 1), id(i, j), -1.0));
                }
            }
        }
        let a = CsrMatrix::from_triplets(n, n, &t);
        let bt: Vec<_> = (0..n).map(|i| (i, i, 1.0 + (i % 7) as f64 * 0.1)).collect();
        let b = CsrMatrix::from_triplets(n, n, &bt);
        let sparse = generalized_eigensolve(&a, &b, 6, EigenMode::Mass).unwrap();
        let dense = dense_generalized_eigensolve(&a.to_dense(), &b.to_dense(), 6).unwrap();
        for k in 0..6 {
            assert!((sparse.values[k] - dense.values[k]).abs() < 1e-10 * dense.values[k]);
        }
    }

    #[test]
    fn boundary_mode_matches_direct_schur() {
        // path graph with B supported on the two end nodes
        let n = 6;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, &t);
        let b = CsrMatrix::from_triplets(n, n, &[(0, 0, 1.0), (n - 1, n - 1, 1.0)]);
        let p = generalized_eigensolve(&a, &b, 2, EigenMode::Boundary).unwrap();
        // A x = theta B x: interior rows are harmonic, so x is affine between the ends
        for (theta, x) in p.values.iter().zip(&p.vectors) {
            let r: Vec<f64> = a.mul_vec(x).iter().zip(b.mul_vec(x)).map(|(u, v)| u - theta * v).collect();
            assert!(norm(&r) < 1e-12);
            assert!((b.bilinear(x, x) - 1.0).abs() < 1e-12);
        }
        assert!(p.values[0] < p.values[1]);
        assert!(matches!(
            generalized_eigensolve(&a, &CsrMatrix::zeros(n, n), 1, EigenMode::Boundary),
            Err(Error::NoSteklovBoundary)
        ));
    }
}
