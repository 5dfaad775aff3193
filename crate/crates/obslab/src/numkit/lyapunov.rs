//! Continuous Lyapunov equation for small dense systems.

use crate::error::{Error, Result};
use crate::numkit::matrix::Matrix;

/// Residual ceiling accepted for a solved pair, in max-abs norm.
pub const LYAPUNOV_RESIDUAL_TOL: f64 = 1e-10;

/// Solve `L^T P + P L = -Q` for symmetric positive definite `P`.
///
/// The equation is vectorized into the n^2 x n^2 system
/// `(I (x) L^T + L^T (x) I) vec(P) = -vec(Q)` and solved by dense elimination
/// with partial pivoting. The result is symmetrized and checked: the residual
/// must be below 1e-10 and `P` must be positive definite, which fails exactly
/// when `L` is not Hurwitz (given a positive definite `Q`).
pub fn solve_lyapunov(l: &Matrix, q: &Matrix) -> Result<Matrix> {
    if !l.is_square() || !q.is_square() || l.rows() != q.rows() {
        return Err(Error::InvalidArgument(format!(
            "lyapunov dimensions mismatch: L is {}x{}, Q is {}x{}",
            l.rows(),
            l.cols(),
            q.rows(),
            q.cols()
        )));
    }
    if !q.is_symmetric(1e-12) {
        return Err(Error::InvalidArgument("Q must be symmetric".into()));
    }
    let n = l.rows();
    let dim = n * n;
    let mut system = Matrix::zeros(dim, dim);
    let mut rhs = vec![0.0; dim];

    // Row (i, j) of L^T P + P L = -Q:
    //   sum_k L[k][i] P[k][j] + sum_k P[i][k] L[k][j] = -Q[i][j]
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            rhs[row] = -q[(i, j)];
            for k in 0..n {
                system[(row, k * n + j)] += l[(k, i)];
                system[(row, i * n + k)] += l[(k, j)];
            }
        }
    }

    let vec_p = system.solve(&rhs).map_err(|e| match e {
        Error::SingularSystem(msg) => Error::SingularSystem(format!(
            "lyapunov system singular (is the matrix Hurwitz?): {msg}"
        )),
        other => other,
    })?;

    let mut p = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // Symmetrize: the exact solution is symmetric, this removes roundoff skew.
            p[(i, j)] = 0.5 * (vec_p[i * n + j] + vec_p[j * n + i]);
        }
    }

    let residual = lyapunov_residual(l, &p, q)?;
    if residual > LYAPUNOV_RESIDUAL_TOL {
        return Err(Error::SingularSystem(format!(
            "lyapunov residual {residual:.3e} exceeds {LYAPUNOV_RESIDUAL_TOL:.0e}"
        )));
    }
    if !p.is_positive_definite() {
        return Err(Error::SingularSystem(
            "lyapunov solution is not positive definite; matrix is not Hurwitz".into(),
        ));
    }
    Ok(p)
}

/// Max-abs norm of `L^T P + P L + Q`.
pub fn lyapunov_residual(l: &Matrix, p: &Matrix, q: &Matrix) -> Result<f64> {
    let lt = l.transpose();
    let res = lt.matmul(p)?.add(&p.matmul(l)?)?.add(q)?;
    Ok(res.max_abs())
}

/// A solved Lyapunov pair `(P, Q)` with the defining residual verified at
/// construction.
#[derive(Debug, Clone)]
pub struct LyapunovPair {
    p: Matrix,
    q: Matrix,
}

impl LyapunovPair {
    /// Solve for `P` against the given `L` and positive definite `Q`.
    pub fn solve(l: &Matrix, q: Matrix) -> Result<Self> {
        if !q.is_positive_definite() {
            return Err(Error::InvalidArgument("Q must be positive definite".into()));
        }
        let p = solve_lyapunov(l, &q)?;
        Ok(Self { p, q })
    }

    pub fn p(&self) -> &Matrix {
        &self.p
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    /// e^T P b with b = (0, ..., 0, 1)^T: the last column of P dotted with e.
    pub fn error_coupling(&self, e: &[f64]) -> Result<f64> {
        if e.len() != self.p.rows() {
            return Err(Error::InvalidArgument(format!(
                "error vector length {} does not match P dimension {}",
                e.len(),
                self.p.rows()
            )));
        }
        let last = self.p.cols() - 1;
        Ok(e.iter().enumerate().map(|(i, ei)| ei * self.p[(i, last)]).sum())
    }
}
