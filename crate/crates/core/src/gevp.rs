//! Symmetric-definite generalized eigenproblem `A c = lambda L c`.
//!
//! `A = M + K/Bo` is factored as `A = G G^T`; the symmetric matrix
//! `C = G^{-1} L G^{-T}` has eigenvalues `theta = 1/lambda`, so the smallest
//! sloshing eigenvalues come from the largest (best resolved) `theta`.

use nalgebra::{DMatrix, DVector};

use crate::basis::BasisSpec;
use crate::error::{Error, Result};
use crate::system::{Bond, SpectralSystem};

/// Iteration budget handed to the dense symmetric eigensolver.
pub const EIGEN_MAX_ITER: usize = 100_000;

/// Transformed eigenvalues below `-INDEFINITE_TOL * theta_max` mean `L` is
/// indefinite rather than merely rank-deficient to rounding.
pub const INDEFINITE_TOL: f64 = 1e-8;

/// `(lambdas, vectors, residuals)`, ascending in `lambda`.
pub type EigenPairs = (Vec<f64>, Vec<DVector<f64>>, Vec<f64>);

/// Ascending eigenpairs of a discrete sloshing problem.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    /// `lambda_j = omega_j^2`, ascending.
    pub lambdas: Vec<f64>,
    /// Coefficient vectors scaled so that `c^T L c = 1`.
    pub vectors: Vec<DVector<f64>>,
    /// `||A c - lambda L c||_2` per pair.
    pub residuals: Vec<f64>,
    pub bond: Bond,
    pub basis: BasisSpec,
}

impl EigenSolution {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

/// Lower-triangular `G` with `A = G G^T`. Reports the first non-positive pivot.
pub fn cholesky_lower(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if let Some(chol) = nalgebra::Cholesky::new(a.clone()) {
        return Ok(chol.l());
    }
    Err(first_bad_pivot(a))
}

/// Replays the factorization to locate the failing pivot.
fn first_bad_pivot(a: &DMatrix<f64>) -> Error {
    let n = a.nrows();
    let mut g = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut diag = a[(j, j)];
        for k in 0..j {
            diag -= g[(j, k)] * g[(j, k)];
        }
        if !(diag > 0.0) {
            return Error::NotPositiveDefinite {
                row: j,
                pivot: diag,
            };
        }
        let gjj = diag.sqrt();
        g[(j, j)] = gjj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= g[(i, k)] * g[(j, k)];
            }
            g[(i, j)] = s / gjj;
        }
    }
    // nalgebra rejected a matrix whose pivots are all positive: report the
    // smallest one
    let (row, pivot) = (0..n)
        .map(|j| (j, g[(j, j)] * g[(j, j)]))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap_or((0, 0.0));
    Error::NotPositiveDefinite { row, pivot }
}

/// Transformed matrix `C = G^{-1} L G^{-T}` (symmetrized).
fn transformed(g: &DMatrix<f64>, l: &DMatrix<f64>) -> DMatrix<f64> {
    let y = g
        .solve_lower_triangular(l)
        .expect("Cholesky factor has positive diagonal");
    let c = g
        .solve_lower_triangular(&y.transpose())
        .expect("Cholesky factor has positive diagonal");
    (&c + c.transpose()) * 0.5
}

fn check_count(count: usize, dim: usize) -> Result<()> {
    if count == 0 || count > dim {
        Err(Error::EigenCount {
            requested: count,
            dim,
        })
    } else {
        Ok(())
    }
}

fn check_definite(theta: &[f64], count: usize) -> Result<()> {
    let theta_max = theta.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let theta_min = theta.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(theta_max > 0.0) {
        return Err(Error::IndefiniteKernel {
            theta: theta_max,
            theta_max,
        });
    }
    if theta_min < -INDEFINITE_TOL * theta_max {
        return Err(Error::IndefiniteKernel {
            theta: theta_min,
            theta_max,
        });
    }
    // the requested pairs themselves must be strictly positive
    let mut sorted = theta.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    if sorted[count - 1] <= 0.0 {
        return Err(Error::IndefiniteKernel {
            theta: sorted[count - 1],
            theta_max,
        });
    }
    Ok(())
}

/// Flip so the first entry that is not negligible is positive.
fn fix_sign(v: &mut DVector<f64>) {
    let scale = v.amax();
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12 * scale).copied() {
        if first < 0.0 {
            v.neg_mut();
        }
    }
}

/// The `count` smallest eigenpairs of `A c = lambda L c` for arbitrary
/// symmetric `A` (positive definite) and `L`.
///
/// Returns `(lambdas, vectors, residuals)` with `c^T L c = 1`.
pub fn solve_pair(a: &DMatrix<f64>, l: &DMatrix<f64>, count: usize) -> Result<EigenPairs> {
    check_count(count, a.nrows())?;
    let g = cholesky_lower(a)?;
    let c = transformed(&g, l);
    let eig = c
        .try_symmetric_eigen(f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(Error::NoConvergence(EIGEN_MAX_ITER))?;
    let theta: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    check_definite(&theta, count)?;

    let mut order: Vec<usize> = (0..theta.len()).collect();
    order.sort_by(|&p, &q| theta[q].total_cmp(&theta[p]));

    let gt = g.transpose();
    let mut lambdas = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    for &k in order.iter().take(count) {
        let th = theta[k];
        let y = eig.eigenvectors.column(k).into_owned();
        let mut v = gt
            .solve_upper_triangular(&y)
            .expect("Cholesky factor has positive diagonal");
        v /= th.sqrt();
        fix_sign(&mut v);
        let lambda = 1.0 / th;
        residuals.push((a * &v - l * &v * lambda).norm());
        lambdas.push(lambda);
        vectors.push(v);
    }
    Ok((lambdas, vectors, residuals))
}

/// The `count` smallest eigenvalues only (no eigenvectors), for large
/// reference solves.
pub fn eigenvalues_pair(a: &DMatrix<f64>, l: &DMatrix<f64>, count: usize) -> Result<Vec<f64>> {
    check_count(count, a.nrows())?;
    let g = cholesky_lower(a)?;
    let c = transformed(&g, l);
    let theta: Vec<f64> = c.symmetric_eigenvalues().iter().copied().collect();
    check_definite(&theta, count)?;
    let mut sorted = theta;
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(sorted.into_iter().take(count).map(|t| 1.0 / t).collect())
}

/// Smallest `count` eigenpairs of `(M + K/Bo) c = lambda L c`.
pub fn solve_gevp(system: &SpectralSystem, bond: Bond, count: usize) -> Result<EigenSolution> {
    let a = system.operator(bond);
    let (lambdas, vectors, residuals) = solve_pair(&a, &system.kernel, count)?;
    Ok(EigenSolution {
        lambdas,
        vectors,
        residuals,
        bond,
        basis: system.basis.clone(),
    })
}

/// Smallest `count` eigenvalues of `(M + K/Bo) c = lambda L c`.
pub fn gevp_eigenvalues(system: &SpectralSystem, bond: Bond, count: usize) -> Result<Vec<f64>> {
    eigenvalues_pair(&system.operator(bond), &system.kernel, count)
}
