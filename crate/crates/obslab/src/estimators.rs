//! Universal uncertainty approximators built from output measurements alone:
//! the high-order integral-chain differentiator and the extended observer,
//! together with their frequency-domain analysis and error bounds.
//!
//! Both estimators share the gain structure (epsilon, a_1..a_{n+1}) with a
//! Hurwitz a-polynomial. The integral-chain structure feeds the measurement
//! correction into the *last* equation only, so noise is attenuated through
//! every upstream integrator; the extended observer corrects every equation
//! and carries the uncertainty as an extra state.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkit::{observer_noise_tf, routh_hurwitz, Matrix, Polynomial};

/// Gains shared by the integral-chain differentiator and the extended
/// observer: perturbation parameter epsilon and coefficients a_1..a_{n+1}
/// of a Hurwitz polynomial s^(n+1) + a_{n+1} s^n + ... + a_1.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorGains {
    order: usize,
    epsilon: f64,
    a: Vec<f64>,
}

impl EstimatorGains {
    /// Build gains from epsilon and the ascending coefficient list
    /// (a_1, ..., a_{n+1}); the plant order n is `a.len() - 1`.
    ///
    /// The degenerate order-0 case (a single coefficient) is allowed so the
    /// first-order filter edge cases remain constructible; estimators
    /// attached to a plant are checked for matching order at scenario
    /// validation.
    pub fn new(epsilon: f64, a: Vec<f64>) -> Result<Self> {
        if epsilon.is_nan() || epsilon <= 0.0 || !epsilon.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be positive and finite, got {epsilon}"
            )));
        }
        if a.is_empty() {
            return Err(Error::InvalidArgument("gain list a_1..a_{n+1} must be nonempty".into()));
        }
        let order = a.len() - 1;
        let poly = Self::characteristic(&a)?;
        if poly.degree() >= 1 && !routh_hurwitz(&poly)? {
            return Err(Error::InvalidArgument(
                "estimator polynomial s^(n+1) + a_{n+1} s^n + ... + a_1 is not Hurwitz".into(),
            ));
        }
        if poly.degree() == 0 {
            unreachable!("a nonempty gain list yields degree >= 1");
        }
        Ok(Self { order, epsilon, a })
    }

    fn characteristic(a: &[f64]) -> Result<Polynomial> {
        let mut coeffs = Vec::with_capacity(a.len() + 1);
        coeffs.push(1.0);
        coeffs.extend(a.iter().rev());
        Polynomial::new(coeffs)
    }

    /// Plant order n; the estimator itself carries n+1 states.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Ascending coefficients (a_1, ..., a_{n+1}).
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// The unscaled polynomial sigma^(n+1) + a_{n+1} sigma^n + ... + a_1.
    pub fn sigma_polynomial(&self) -> Polynomial {
        Self::characteristic(&self.a).expect("validated at construction")
    }

    /// a_i / epsilon^(n+2-i) for i in 1..=n+1: the scaled coefficient
    /// multiplying the i-th estimator state in the last chain equation.
    fn scaled(&self, i: usize) -> f64 {
        self.a[i - 1] / self.epsilon.powi((self.order + 2 - i) as i32)
    }

    /// Denominator polynomial of the estimator transfer functions:
    /// s^(n+1) + (a_{n+1}/eps) s^n + ... + a_1/eps^(n+1).
    pub fn scaled_denominator(&self) -> Polynomial {
        let np1 = self.order + 1;
        let mut coeffs = Vec::with_capacity(np1 + 1);
        coeffs.push(1.0);
        for j in 1..=np1 {
            coeffs.push(self.a[np1 - j] / self.epsilon.powi(j as i32));
        }
        Polynomial::new(coeffs).expect("leading 1.0 is nonzero")
    }
}

/// Right-hand side of the integral-chain differentiator driven by the
/// measurement y. The correction enters only the last equation:
///
///   xhat_i'     = xhat_{i+1}                       (i = 1..n)
///   xhat_{n+1}' = -(a_1/eps^{n+1})(xhat_1 - y)
///                 - (a_2/eps^n) xhat_2 - ... - (a_{n+1}/eps) xhat_{n+1}
pub fn differentiator_rhs(xhat: &[f64], y: f64, gains: &EstimatorGains) -> Vec<f64> {
    let np1 = gains.order + 1;
    debug_assert_eq!(xhat.len(), np1);
    let mut d = vec![0.0; np1];
    d[..np1 - 1].copy_from_slice(&xhat[1..]);
    let mut last = -gains.scaled(1) * (xhat[0] - y);
    for i in 2..=np1 {
        last -= gains.scaled(i) * xhat[i - 1];
    }
    d[np1 - 1] = last;
    d
}

/// Right-hand side of the extended observer. The correction term
/// -(a_{n+2-i}/eps^i)(xhat_1 - y) enters every equation; the control feeds
/// the n-th equation through the supplied gain evaluation g(xhat):
///
///   xhat_i'     = xhat_{i+1} - (a_{n+2-i}/eps^i)(xhat_1 - y)   (i = 1..n-1)
///   xhat_n'     = xhat_{n+1} - (a_2/eps^n)(xhat_1 - y) + g(xhat) u
///   xhat_{n+1}' = -(a_1/eps^{n+1})(xhat_1 - y)
pub fn observer_rhs(
    xhat: &[f64],
    y: f64,
    u: f64,
    g_hat: f64,
    gains: &EstimatorGains,
) -> Vec<f64> {
    let n = gains.order;
    let np1 = n + 1;
    debug_assert_eq!(xhat.len(), np1);
    let innovation = xhat[0] - y;
    let mut d = vec![0.0; np1];
    for i in 1..=n {
        // a_{n+2-i} / eps^i
        let coeff = gains.a[np1 - i] / gains.epsilon.powi(i as i32);
        d[i - 1] = xhat[i] - coeff * innovation;
    }
    if n >= 1 {
        d[n - 1] += g_hat * u;
    }
    d[np1 - 1] = -gains.scaled(1) * innovation;
    d
}

/// Uncertainty estimate recovered from the differentiator's top state:
/// f_hat = xhat_{n+1} - g(xhat) u.
pub fn uncertainty_from_differentiator(xhat_np1: f64, g_hat: f64, u: f64) -> f64 {
    xhat_np1 - g_hat * u
}

/// Closed-form frequency response of the integral-chain differentiator from
/// the measurement to channel i:
///
///   H_i(s) = (a_1/eps^{n+1}) s^(i-1)
///            / (s^{n+1} + (a_{n+1}/eps) s^n + ... + a_1/eps^{n+1})
///
/// evaluated at s = j omega.
pub fn freq_response(gains: &EstimatorGains, channel: usize, omega: f64) -> Result<Complex64> {
    let np1 = gains.order + 1;
    if channel == 0 || channel > np1 {
        return Err(Error::InvalidArgument(format!(
            "channel {channel} out of range 1..={np1}"
        )));
    }
    let s = Complex64::new(0.0, omega);
    let denom = gains.scaled_denominator().eval_complex(s);
    let numer = gains.scaled(1) * s.powu(channel as u32 - 1);
    Ok(numer / denom)
}

/// Inputs for the exponential observer error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObserverErrorBoundInputs {
    /// Decay constant of the scaled error dynamics (1/s).
    pub lambda: f64,
    /// Bound on the forcing term norm.
    pub l_b: f64,
    /// Norm of the initial error.
    pub z0_norm: f64,
    pub epsilon: f64,
}

impl ObserverErrorBoundInputs {
    pub fn validated(self) -> Result<Self> {
        if self.lambda > 0.0 && self.l_b >= 0.0 && self.z0_norm >= 0.0 && self.epsilon > 0.0 {
            Ok(self)
        } else {
            Err(Error::InvalidArgument(
                "observer bound inputs must be positive (z0, l_B nonnegative)".into(),
            ))
        }
    }
}

/// Exponential bound on the observer error norm:
///
///   ||z(t)|| <= e^{-(lambda/eps) t} ||z(0)|| + (eps l_B / lambda)(1 - e^{-(lambda/eps) t})
pub fn observer_error_bound(input: &ObserverErrorBoundInputs, t: f64) -> f64 {
    let decay = (-(input.lambda / input.epsilon) * t).exp();
    decay * input.z0_norm + (input.epsilon * input.l_b / input.lambda) * (1.0 - decay)
}

/// State-space form of the integral-chain differentiator driven by the
/// measurement: returns (A, L) with xhat' = A xhat + L y.
pub fn integral_chain_system(gains: &EstimatorGains) -> (Matrix, Vec<f64>) {
    let np1 = gains.order + 1;
    let mut a = Matrix::zeros(np1, np1);
    for i in 0..np1 - 1 {
        a[(i, i + 1)] = 1.0;
    }
    for i in 1..=np1 {
        a[(np1 - 1, i - 1)] = -gains.scaled(i);
    }
    let mut l = vec![0.0; np1];
    l[np1 - 1] = gains.scaled(1);
    (a, l)
}

/// State-space form of the classical high-gain differentiator (the linear
/// part of the extended observer driven by the measurement): the correction
/// appears in every row, so measurement noise enters every layer directly.
pub fn highgain_system(gains: &EstimatorGains) -> (Matrix, Vec<f64>) {
    let n = gains.order;
    let np1 = n + 1;
    let mut a = Matrix::zeros(np1, np1);
    let mut l = vec![0.0; np1];
    for i in 0..np1 - 1 {
        a[(i, i + 1)] = 1.0;
    }
    for i in 1..=np1 {
        // Row i carries -(a_{n+2-i}/eps^i) against the innovation.
        let coeff = gains.a[np1 - i] / gains.epsilon.powi(i as i32);
        a[(i - 1, 0)] = -coeff;
        l[i - 1] = coeff;
    }
    (a, l)
}

/// Magnitudes of the measurement-to-channel transfer of the integral-chain
/// and the classical high-gain structure at the same (n, eps, a), both
/// evaluated from their state-space forms. No ordering is asserted here; the
/// comparison only becomes one-sided in the high-frequency regime.
pub fn noise_channel_compare(
    gains: &EstimatorGains,
    omega: f64,
    channel: usize,
) -> Result<(f64, f64)> {
    let (a_ic, l_ic) = integral_chain_system(gains);
    let (a_hg, l_hg) = highgain_system(gains);
    let h_ic = observer_noise_tf(&a_ic, &l_ic, channel, omega)?;
    let h_hg = observer_noise_tf(&a_hg, &l_hg, channel, omega)?;
    Ok((h_ic.norm(), h_hg.norm()))
}

/// Complex high-gain transfer for a channel (used for phase reporting).
pub fn highgain_noise_tf(gains: &EstimatorGains, channel: usize, omega: f64) -> Result<Complex64> {
    let (a_hg, l_hg) = highgain_system(gains);
    observer_noise_tf(&a_hg, &l_hg, channel, omega)
}

/// Peaking guard: clamp estimates to a box before they reach a controller
/// during the first `10 * epsilon` seconds of a run. High-gain estimators
/// peak hard for small epsilon; logged estimates stay raw, only the
/// controller input is clamped.
pub fn clamp_estimates(xhat: &[f64], t: f64, gains: &EstimatorGains, bound: f64) -> Vec<f64> {
    if t < 10.0 * gains.epsilon {
        xhat.iter().map(|v| v.clamp(-bound, bound)).collect()
    } else {
        xhat.to_vec()
    }
}
