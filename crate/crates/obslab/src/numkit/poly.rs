//! Real polynomials (highest-degree coefficient first) and the Routh-Hurwitz
//! stability test.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entries of the Routh first column smaller than this are treated as a
/// stability failure outright; no epsilon-substitution is attempted for
/// marginal polynomials.
const ROUTH_ZERO_TOL: f64 = 1e-12;

/// Real polynomial with coefficients ordered highest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("polynomial needs at least one coefficient".into()));
        }
        if coeffs[0] == 0.0 || !coeffs[0].is_finite() {
            return Err(Error::InvalidArgument(format!(
                "leading coefficient must be finite and nonzero, got {}",
                coeffs[0]
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("polynomial coefficients must be finite".into()));
        }
        Ok(Self { coeffs })
    }

    /// Monic polynomial s^n + k_n s^(n-1) + ... + k_1 from a gain vector
    /// (k_1, ..., k_n): the lowest-order coefficient comes first in `gains`.
    pub fn from_gain_vector(gains: &[f64]) -> Result<Self> {
        if gains.is_empty() {
            return Err(Error::InvalidArgument("gain vector must be nonempty".into()));
        }
        let mut coeffs = Vec::with_capacity(gains.len() + 1);
        coeffs.push(1.0);
        coeffs.extend(gains.iter().rev());
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Horner evaluation at a complex point.
    pub fn eval_complex(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in &self.coeffs {
            acc = acc * s + c;
        }
        acc
    }
}

/// True iff every root of `p` has strictly negative real part.
///
/// Builds the Routh array; the polynomial is Hurwitz iff the first column is
/// full, free of (near-)zeros, and of a single sign. Any first-column entry
/// with magnitude below 1e-12 is rejected as unstable.
pub fn routh_hurwitz(p: &Polynomial) -> Result<bool> {
    let deg = p.degree();
    if deg < 1 {
        return Err(Error::InvalidArgument("routh_hurwitz needs degree >= 1".into()));
    }
    let c = p.coeffs();
    let width = deg / 2 + 1;
    let take_row = |offset: usize| -> Vec<f64> {
        let mut row = vec![0.0; width];
        let mut idx = offset;
        let mut j = 0;
        while idx <= deg {
            row[j] = c[idx];
            idx += 2;
            j += 1;
        }
        row
    };

    let mut prev = take_row(0);
    let mut cur = take_row(1);
    let mut first_column = vec![prev[0], cur[0]];

    for _ in 2..=deg {
        if cur[0].abs() < ROUTH_ZERO_TOL {
            return Ok(false);
        }
        let mut next = vec![0.0; width];
        for j in 0..width - 1 {
            next[j] = (cur[0] * prev[j + 1] - prev[0] * cur[j + 1]) / cur[0];
        }
        first_column.push(next[0]);
        prev = cur;
        cur = next;
    }

    if first_column.iter().any(|v| v.abs() < ROUTH_ZERO_TOL) {
        return Ok(false);
    }
    let sign = first_column[0].signum();
    Ok(first_column.iter().all(|v| v.signum() == sign))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_with_positive_routh_column() {
        // First column works out to 1, 10, 9, 10.
        let p = Polynomial::new(vec![1.0, 10.0, 10.0, 10.0]).unwrap();
        assert!(routh_hurwitz(&p).unwrap());
    }

    #[test]
    fn imaginary_axis_roots_rejected() {
        let p = Polynomial::new(vec![1.0, 0.0, 1.0]).unwrap();
        assert!(!routh_hurwitz(&p).unwrap());
    }

    #[test]
    fn repeated_stable_root_accepted() {
        let p = Polynomial::new(vec![1.0, 2.0, 1.0]).unwrap();
        assert!(routh_hurwitz(&p).unwrap());
    }

    #[test]
    fn degree_zero_is_an_error() {
        let p = Polynomial::new(vec![1.0]).unwrap();
        assert!(matches!(routh_hurwitz(&p), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn negative_leading_coefficient_handled_by_sign_rule() {
        // -(s+1)(s+2) = -s^2 - 3s - 2: still Hurwitz.
        let p = Polynomial::new(vec![-1.0, -3.0, -2.0]).unwrap();
        assert!(routh_hurwitz(&p).unwrap());
    }

    #[test]
    fn unstable_polynomial_rejected() {
        // (s-1)(s+2) = s^2 + s - 2
        let p = Polynomial::new(vec![1.0, 1.0, -2.0]).unwrap();
        assert!(!routh_hurwitz(&p).unwrap());
    }

    #[test]
    fn gain_vector_ordering() {
        let p = Polynomial::from_gain_vector(&[20.0, 10.0]).unwrap();
        assert_eq!(p.coeffs(), &[1.0, 10.0, 20.0]);
    }
}
