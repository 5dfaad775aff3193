//! Small dense real matrices with the handful of operations the rest of the
//! crate needs: multiplication, linear solves with partial pivoting (real and
//! complex), and a Cholesky-based positive-definiteness test.
//!
//! Everything here targets matrices of dimension at most (n+1) x (n+1) with
//! n <= 10, so the implementations are unblocked and allocation-happy on
//! purpose.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense real matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if rows * cols != entries.len() {
            return Err(Error::InvalidArgument(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Identity scaled by `c`, handy for Q = c*I choices.
    pub fn scaled_identity(n: usize, c: f64) -> Self {
        let mut m = Self::identity(n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidArgument("matrix needs at least one row".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged rows in matrix literal".into()));
        }
        let entries = rows.iter().flat_map(|row| row.iter().copied()).collect();
        Self::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// y = A x for a column vector x.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::InvalidArgument(format!(
                "matvec dimension mismatch: {}x{} with vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut y = vec![0.0; self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                y[i] += self[(i, j)] * x[j];
            }
        }
        Ok(y)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::InvalidArgument("matrix addition shape mismatch".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(rhs.entries.iter())
            .map(|(a, b)| a + b)
            .collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, entries })
    }

    /// Max absolute entry (the infinity norm used for residual checks).
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self[(i, j)] - self[(j, i)]).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Positive definiteness via Cholesky; equivalent to all leading principal
    /// minors being strictly positive for a symmetric matrix.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        let mut l = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self[(i, j)];
                for k in 0..j {
                    sum -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if sum <= 0.0 {
                        return false;
                    }
                    l[i * n + i] = sum.sqrt();
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        true
    }

    /// Solve A x = b by Gaussian elimination with partial pivoting. Rows are
    /// equilibrated first so the singularity test is meaningful for badly
    /// row-scaled systems (observer matrices mix powers of 1/epsilon).
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(Error::InvalidArgument("solve requires a square matrix".into()));
        }
        if b.len() != self.rows {
            return Err(Error::InvalidArgument("solve right-hand side length mismatch".into()));
        }
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut x = b.to_vec();
        for r in 0..n {
            let row_max = a[r * n..(r + 1) * n].iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if row_max < 1e-300 {
                return Err(Error::SingularSystem(format!("row {r} is identically zero")));
            }
            for j in 0..n {
                a[r * n + j] /= row_max;
            }
            x[r] /= row_max;
        }

        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_val = a[col * n + col].abs();
            for r in (col + 1)..n {
                let v = a[r * n + col].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = r;
                }
            }
            if pivot_val < 1e-14 {
                return Err(Error::SingularSystem(format!(
                    "pivot {pivot_val:.3e} below threshold in column {col}"
                )));
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                }
                x.swap(col, pivot_row);
            }
            let pivot = a[col * n + col];
            for r in (col + 1)..n {
                let factor = a[r * n + col] / pivot;
                if factor == 0.0 {
                    continue;
                }
                a[r * n + col] = 0.0;
                for j in (col + 1)..n {
                    a[r * n + j] -= factor * a[col * n + j];
                }
                x[r] -= factor * x[col];
            }
        }

        for row in (0..n).rev() {
            let mut sum = x[row];
            for j in (row + 1)..n {
                sum -= a[row * n + j] * x[j];
            }
            x[row] = sum / a[row * n + row];
        }
        Ok(x)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Solve the complex system A x = b by Gaussian elimination with partial
/// pivoting and row equilibration. `a` is row-major, `n x n`.
pub fn solve_complex(a: &[Complex64], b: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    if a.len() != n * n || b.len() != n {
        return Err(Error::InvalidArgument("complex solve dimension mismatch".into()));
    }
    let mut a = a.to_vec();
    let mut x = b.to_vec();
    for r in 0..n {
        let row_max = a[r * n..(r + 1) * n].iter().fold(0.0f64, |m, v| m.max(v.norm()));
        if row_max < 1e-300 {
            return Err(Error::SingularSystem(format!("row {r} is identically zero")));
        }
        for j in 0..n {
            a[r * n + j] /= row_max;
        }
        x[r] /= row_max;
    }

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_val = a[col * n + col].norm();
        for r in (col + 1)..n {
            let v = a[r * n + col].norm();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = r;
            }
        }
        if pivot_val < 1e-14 {
            return Err(Error::SingularSystem(format!(
                "complex pivot {pivot_val:.3e} below threshold in column {col}"
            )));
        }
        if pivot_row != col {
            for j in 0..n {
                a.swap(col * n + j, pivot_row * n + j);
            }
            x.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for r in (col + 1)..n {
            let factor = a[r * n + col] / pivot;
            a[r * n + col] = Complex64::new(0.0, 0.0);
            for j in (col + 1)..n {
                let v = a[col * n + j];
                a[r * n + j] -= factor * v;
            }
            let v = x[col];
            x[r] -= factor * v;
        }
    }

    for row in (0..n).rev() {
        let mut sum = x[row];
        for j in (row + 1)..n {
            sum -= a[row * n + j] * x[j];
        }
        x[row] = sum / a[row * n + row];
    }
    Ok(x)
}
