//! Shared dense linear-algebra and polynomial utilities: Hurwitz tests,
//! companion matrices, Lyapunov solving, eigenvalues, and complex
//! transfer-function evaluation for linear observer structures.
//!
//! All matrices in this crate are tiny (at most (n+1) x (n+1) with n <= 10),
//! so every routine here is dense and unblocked. Values are immutable after
//! construction and all operations are pure.

mod eig;
mod lyapunov;
mod matrix;
mod poly;

pub use eig::{eigenvalues, polynomial_roots};
pub use lyapunov::{lyapunov_residual, solve_lyapunov, LyapunovPair, LYAPUNOV_RESIDUAL_TOL};
pub use matrix::{solve_complex, Matrix};
pub use poly::{routh_hurwitz, Polynomial};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Companion realization of the error dynamics for a gain vector
/// (k_1, ..., k_n): ones on the superdiagonal, `(-k_1, ..., -k_n)` along the
/// bottom row, so the characteristic polynomial is
/// s^n + k_n s^(n-1) + ... + k_1. Also returns b = (0, ..., 0, 1)^T.
pub fn companion_from_gains(gains: &[f64]) -> Result<(Matrix, Vec<f64>)> {
    let n = gains.len();
    if n == 0 {
        return Err(Error::InvalidArgument("gain vector must be nonempty".into()));
    }
    let mut m = Matrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        m[(i, i + 1)] = 1.0;
    }
    for (j, &k) in gains.iter().enumerate() {
        m[(n - 1, j)] = -k;
    }
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    Ok((m, b))
}

/// Smallest |Re(root)| over the roots of a Hurwitz polynomial: the slowest
/// decay rate of the associated linear dynamics.
pub fn min_decay_rate(p: &Polynomial) -> Result<f64> {
    if !routh_hurwitz(p)? {
        return Err(Error::InvalidArgument(
            "min_decay_rate requires a Hurwitz polynomial".into(),
        ));
    }
    let roots = polynomial_roots(p)?;
    Ok(roots
        .iter()
        .map(|r| r.re.abs())
        .fold(f64::INFINITY, f64::min))
}

/// Transfer gain e_i^T (jw I - A)^{-1} L of a linear observer error system,
/// evaluated by one complex dense solve.
pub fn observer_noise_tf(a: &Matrix, l: &[f64], channel: usize, omega: f64) -> Result<Complex64> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("system matrix must be square".into()));
    }
    let n = a.rows();
    if l.len() != n {
        return Err(Error::InvalidArgument("input column length mismatch".into()));
    }
    if channel == 0 || channel > n {
        return Err(Error::InvalidArgument(format!(
            "channel {channel} out of range 1..={n}"
        )));
    }
    let mut sys = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let diag = if i == j { Complex64::new(0.0, omega) } else { Complex64::new(0.0, 0.0) };
            sys[i * n + j] = diag - a[(i, j)];
        }
    }
    let rhs: Vec<Complex64> = l.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let x = solve_complex(&sys, &rhs, n)?;
    Ok(x[channel - 1])
}
