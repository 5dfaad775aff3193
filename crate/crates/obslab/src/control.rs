//! The four tracking control laws (full-state, adaptive, differentiator-based,
//! observer-based), the gain-vector machinery, and the error-bound
//! diagnostics.
//!
//! All laws share the structure u = (1/g)[-f_hat + y_d^(n) - K^T e_hat] with
//! e measured against the reference derivatives. The minus sign on the K
//! term is the stabilizing convention: it yields the target error dynamics
//! e_n' + k_n e_n + ... + k_1 e_1 = 0.

use crate::error::{Error, Result};
use crate::numkit::{routh_hurwitz, Polynomial};
use crate::plant::{PlantModel, Reference};

/// Feedback gains (k_1, ..., k_n) with s^n + k_n s^(n-1) + ... + k_1 Hurwitz.
#[derive(Debug, Clone, PartialEq)]
pub struct GainVector {
    k: Vec<f64>,
}

impl GainVector {
    pub fn new(k: Vec<f64>) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::InvalidArgument("gain vector must be nonempty".into()));
        }
        if k.iter().any(|v| *v <= 0.0 || !v.is_finite()) {
            return Err(Error::InvalidArgument("gains must be positive and finite".into()));
        }
        let poly = Polynomial::from_gain_vector(&k)?;
        if poly.degree() >= 1 && !routh_hurwitz(&poly)? {
            return Err(Error::InvalidArgument(
                "gain polynomial s^n + k_n s^(n-1) + ... + k_1 is not Hurwitz".into(),
            ));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn order(&self) -> usize {
        self.k.len()
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::from_gain_vector(&self.k).expect("validated at construction")
    }

    /// K^T e.
    pub fn feedback(&self, e: &[f64]) -> f64 {
        self.k.iter().zip(e.iter()).map(|(k, e)| k * e).sum()
    }
}

/// Constants bounding the scenario: saturation level, input-gain bounds and
/// Lipschitz constant, and the forcing bounds used by the diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSet {
    /// Control saturation level.
    pub l_u: f64,
    /// Lipschitz constant of the input gain.
    pub l_g: f64,
    /// Lower bound on |g(x)| over the operating domain.
    pub l_inf: f64,
    /// Upper bound on |g(x)| over the operating domain.
    pub l_sup: f64,
    /// Bound on |f_hat + y_d^(n) - K^T e_hat|.
    pub l_1: f64,
    /// Bound on the uncertainty derivative |h(t)|.
    pub l_h: f64,
    /// Bound on the observer forcing norm.
    pub l_b: f64,
}

impl BoundSet {
    pub fn validated(self) -> Result<Self> {
        let all_positive = self.l_u > 0.0
            && self.l_g > 0.0
            && self.l_inf > 0.0
            && self.l_sup > 0.0
            && self.l_1 > 0.0
            && self.l_h > 0.0
            && self.l_b > 0.0;
        if !all_positive || self.l_inf > self.l_sup {
            return Err(Error::InvalidArgument(
                "bound constants must be strictly positive with l_inf <= l_sup".into(),
            ));
        }
        Ok(self)
    }

    /// Estimate the bound constants by sampling the operating domain
    /// x1 in [-pi/3, pi/3], x2 in [-5, 5] (second-order plants).
    pub fn sample(plant: &PlantModel, gains: &GainVector, reference: &Reference, l_u: f64) -> Self {
        let n1 = 61usize;
        let n2 = 61usize;
        let x1_max = std::f64::consts::PI / 3.0;
        let x2_max = 5.0;
        let h1 = 2.0 * x1_max / (n1 - 1) as f64;
        let h2 = 2.0 * x2_max / (n2 - 1) as f64;

        let (l_inf, l_sup) = plant.gain_bounds();
        let mut l_g = 0.0f64;
        let mut f_max = 0.0f64;
        let mut l_h = 0.0f64;
        for i in 0..n1 {
            let x1 = -x1_max + i as f64 * h1;
            for j in 0..n2 {
                let x2 = -x2_max + j as f64 * h2;
                let x = [x1, x2];
                let f = plant.drift(&x);
                let g = plant.input_gain(&x);
                f_max = f_max.max(f.abs());
                // Gradients by central differences.
                let dg1 = (plant.input_gain(&[x1 + 1e-5, x2]) - plant.input_gain(&[x1 - 1e-5, x2]))
                    / 2e-5;
                let dg2 = (plant.input_gain(&[x1, x2 + 1e-5]) - plant.input_gain(&[x1, x2 - 1e-5]))
                    / 2e-5;
                l_g = l_g.max((dg1 * dg1 + dg2 * dg2).sqrt());
                let df1 = (plant.drift(&[x1 + 1e-5, x2]) - plant.drift(&[x1 - 1e-5, x2])) / 2e-5;
                let df2 = (plant.drift(&[x1, x2 + 1e-5]) - plant.drift(&[x1, x2 - 1e-5])) / 2e-5;
                // d f(x(t))/dt = f_x1 x2 + f_x2 (f + g u), worst case over |u| <= l_u.
                l_h = l_h.max((df1 * x2).abs() + df2.abs() * (f.abs() + g.abs() * l_u));
            }
        }
        let n = gains.order();
        let yd_n_max = reference.amplitude * reference.angular_freq.powi(n as i32);
        // Worst-case |e_hat_i| over the domain plus the reference envelope.
        let e1_max = x1_max + reference.amplitude;
        let e2_max = x2_max + reference.amplitude * reference.angular_freq;
        let ke_max = gains.k()[0] * e1_max + gains.k().get(1).copied().unwrap_or(0.0) * e2_max;
        let l_1 = f_max + yd_n_max + ke_max;
        let domain_diameter = (4.0 * x1_max * x1_max + 4.0 * x2_max * x2_max).sqrt();
        let l_b = (l_h * l_h + (l_g * domain_diameter * l_u).powi(2)).sqrt();
        Self { l_u, l_g, l_inf, l_sup, l_1, l_h, l_b }
    }
}

/// A computed control command with its guard flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlCommand {
    pub u: f64,
    /// Saturation clipped the raw command.
    pub saturated: bool,
    /// Gain value actually divided by, after flooring.
    pub g_hat_used: f64,
    /// The gain magnitude was floored before division.
    pub floored: bool,
}

/// Floor |g| at 0.1 * l_inf before dividing; the pendulum input gain
/// vanishes at x1 = +/- pi/2.
fn floor_gain(g: f64, bounds: &BoundSet) -> (f64, bool) {
    let floor = 0.1 * bounds.l_inf;
    if g.abs() >= floor {
        (g, false)
    } else if g == 0.0 {
        (floor, true)
    } else {
        (floor.copysign(g), true)
    }
}

fn saturate(raw: f64, bounds: &BoundSet) -> (f64, bool) {
    if raw.abs() > bounds.l_u {
        (bounds.l_u.copysign(raw), true)
    } else {
        (raw, false)
    }
}

fn command(f_hat: f64, e_hat: &[f64], t: f64, gains: &GainVector, g_eval: f64,
           reference: &Reference, bounds: &BoundSet) -> ControlCommand {
    let n = gains.order();
    let (g_used, floored) = floor_gain(g_eval, bounds);
    let raw = (-f_hat + reference.signal(t, n) - gains.feedback(e_hat)) / g_used;
    let (u, saturated) = saturate(raw, bounds);
    ControlCommand { u, saturated, g_hat_used: g_used, floored }
}

/// Full-information law: u = (1/g(x))[-f(x) + y_d^(n) - K^T e] with the true
/// drift, gain, and state.
pub fn full_state_control(
    x: &[f64],
    t: f64,
    gains: &GainVector,
    plant: &PlantModel,
    reference: &Reference,
    bounds: &BoundSet,
) -> ControlCommand {
    let e = reference.tracking_error(x, t);
    command(plant.drift(x), &e, t, gains, plant.input_gain(x), reference, bounds)
}

/// Adaptive baseline law: the supplied f_hat (fuzzy or RBF output) replaces
/// the true drift; the error is measured on the true state.
pub fn adaptive_control(
    f_hat: f64,
    x: &[f64],
    t: f64,
    gains: &GainVector,
    g_eval: f64,
    reference: &Reference,
    bounds: &BoundSet,
) -> ControlCommand {
    let e = reference.tracking_error(x, t);
    command(f_hat, &e, t, gains, g_eval, reference, bounds)
}

/// Differentiator-based output-feedback law. The uncertainty estimate uses
/// the top differentiator state and the control applied on the previous
/// step: f_hat = xhat_{n+1} - g(xhat) u_prev.
pub fn differentiator_control(
    xhat: &[f64],
    t: f64,
    gains: &GainVector,
    g_hat: f64,
    u_prev: f64,
    reference: &Reference,
    bounds: &BoundSet,
) -> ControlCommand {
    let n = gains.order();
    debug_assert_eq!(xhat.len(), n + 1);
    let f_hat = crate::estimators::uncertainty_from_differentiator(xhat[n], g_hat, u_prev);
    let e_hat = reference.tracking_error(&xhat[..n], t);
    command(f_hat, &e_hat, t, gains, g_hat, reference, bounds)
}

/// Observer-based output-feedback law: the extended state xhat_{n+1} is the
/// uncertainty estimate directly, with no control correction.
pub fn observer_control(
    xhat: &[f64],
    t: f64,
    gains: &GainVector,
    g_hat: f64,
    reference: &Reference,
    bounds: &BoundSet,
) -> ControlCommand {
    let n = gains.order();
    debug_assert_eq!(xhat.len(), n + 1);
    let e_hat = reference.tracking_error(&xhat[..n], t);
    command(xhat[n], &e_hat, t, gains, g_hat, reference, bounds)
}

/// Per-component tracking-error bound |e_i| <= 2^(i-1) phi / lambda^(n-i+1).
pub fn slotine_error_bound(phi: f64, lambda: f64, n: usize, i: usize) -> Result<f64> {
    if phi < 0.0 || lambda <= 0.0 || i == 0 || i > n {
        return Err(Error::InvalidArgument(format!(
            "bound needs phi >= 0, lambda > 0, 1 <= i <= n; got phi={phi}, lambda={lambda}, i={i}, n={n}"
        )));
    }
    Ok(2f64.powi(i as i32 - 1) * phi / lambda.powi((n - i + 1) as i32))
}

/// Which forcing coefficient the phi diagnostic uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiVariant {
    /// Observer form: coefficient l_1 l_g / l_inf.
    Observer,
    /// Differentiator form: coefficient (l_1 / l_inf + l_u) l_g.
    Differentiator,
}

/// Forcing magnitude driving the closed-loop error dynamics:
///
///   phi = |f_ref - xhat_{n+1}| + c ||xhat - x|| + sum_i k_i |x_i - xhat_i|
///
/// where `f_ref` is the quantity the top estimator state targets (the drift
/// for the observer, the full x_n' for the differentiator) and `c` depends
/// on the variant.
pub fn phi_diagnostic(
    f_ref: f64,
    xhat_np1: f64,
    x: &[f64],
    xhat: &[f64],
    gains: &GainVector,
    bounds: &BoundSet,
    variant: PhiVariant,
) -> Result<f64> {
    let n = gains.order();
    if x.len() != n || xhat.len() < n {
        return Err(Error::InvalidArgument("phi diagnostic dimension mismatch".into()));
    }
    let coeff = match variant {
        PhiVariant::Observer => bounds.l_1 * bounds.l_g / bounds.l_inf,
        PhiVariant::Differentiator => (bounds.l_1 / bounds.l_inf + bounds.l_u) * bounds.l_g,
    };
    let dist: f64 = x
        .iter()
        .zip(xhat.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let weighted: f64 = gains
        .k()
        .iter()
        .zip(x.iter().zip(xhat.iter()))
        .map(|(k, (a, b))| k * (a - b).abs())
        .sum();
    Ok((f_ref - xhat_np1).abs() + coeff * dist + weighted)
}
