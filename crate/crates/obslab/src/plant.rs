//! Integrator-chain plant abstraction with the inverted pendulum as the
//! reference instance, plus the sinusoidal reference trajectory.
//!
//! The drift f(x) and input gain g(x) are stored separately so controllers
//! and observers can query the gain at an estimated state independently of
//! the drift.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};

type StateFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// n-order integrator chain: x_i' = x_{i+1}, x_n' = f(x) + g(x) u, y = x_1.
#[derive(Clone)]
pub struct PlantModel {
    order: usize,
    drift: StateFn,
    input_gain: StateFn,
    gain_bounds: (f64, f64),
}

impl PlantModel {
    pub fn new(
        order: usize,
        drift: StateFn,
        input_gain: StateFn,
        gain_bounds: (f64, f64),
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("plant order must be positive".into()));
        }
        let (l_inf, l_sup) = gain_bounds;
        if !(l_inf > 0.0 && l_sup >= l_inf) {
            return Err(Error::InvalidArgument(format!(
                "gain bounds must satisfy 0 < l_inf <= l_sup, got ({l_inf}, {l_sup})"
            )));
        }
        Ok(Self { order, drift, input_gain, gain_bounds })
    }

    /// The inverted pendulum angle subsystem. Gain bounds are sampled over
    /// the operating domain x1 in [-pi/3, pi/3].
    pub fn pendulum(params: PendulumParams) -> Self {
        let p_drift = params;
        let p_gain = params;
        let mut l_inf = f64::INFINITY;
        let mut l_sup = 0.0f64;
        for k in 0..=200 {
            let x1 = -PI / 3.0 + (k as f64) * (2.0 * PI / 3.0) / 200.0;
            let g = params.input_gain(x1).abs();
            l_inf = l_inf.min(g);
            l_sup = l_sup.max(g);
        }
        Self {
            order: 2,
            drift: Arc::new(move |x: &[f64]| p_drift.drift(x[0], x[1])),
            input_gain: Arc::new(move |x: &[f64]| p_gain.input_gain(x[0])),
            gain_bounds: (l_inf, l_sup),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn drift(&self, x: &[f64]) -> f64 {
        (self.drift)(x)
    }

    pub fn input_gain(&self, x: &[f64]) -> f64 {
        (self.input_gain)(x)
    }

    /// (l_inf, l_sup) with l_inf <= |g(x)| <= l_sup on the operating domain.
    pub fn gain_bounds(&self) -> (f64, f64) {
        self.gain_bounds
    }

    /// Full state derivative under control u.
    pub fn derivative(&self, x: &[f64], u: f64) -> Result<Vec<f64>> {
        if x.len() != self.order {
            return Err(Error::InvalidArgument(format!(
                "state length {} does not match plant order {}",
                x.len(),
                self.order
            )));
        }
        if x.iter().any(|v| !v.is_finite()) || !u.is_finite() {
            return Err(Error::InvalidArgument("non-finite state or input".into()));
        }
        let mut dx = vec![0.0; self.order];
        dx[..self.order - 1].copy_from_slice(&x[1..]);
        dx[self.order - 1] = self.drift(x) + self.input_gain(x) * u;
        Ok(dx)
    }
}

impl std::fmt::Debug for PlantModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PlantModel")
            .field("order", &self.order)
            .field("gain_bounds", &self.gain_bounds)
            .finish()
    }
}

/// Physical parameters of the pendulum-on-cart benchmark. `half_length` is
/// half the pendulum length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumParams {
    pub gravity: f64,
    pub cart_mass: f64,
    pub pendulum_mass: f64,
    pub half_length: f64,
}

impl PendulumParams {
    /// Benchmark defaults: m_c = 1 kg, m = 0.1 kg, l = 0.5 m, g = 9.8 m/s^2.
    pub fn benchmark() -> Self {
        Self { gravity: 9.8, cart_mass: 1.0, pendulum_mass: 0.1, half_length: 0.5 }
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.gravity > 0.0
            && self.cart_mass > 0.0
            && self.pendulum_mass > 0.0
            && self.half_length > 0.0)
        {
            return Err(Error::InvalidArgument(
                "pendulum masses, length, and gravity must be strictly positive".into(),
            ));
        }
        // 4/3 - m cos^2(x1)/(m_c + m) > 0 for all x1 iff m/(m_c + m) < 4/3,
        // which positive masses always satisfy; check anyway.
        let ratio = self.pendulum_mass / (self.cart_mass + self.pendulum_mass);
        if ratio >= 4.0 / 3.0 {
            return Err(Error::InvalidArgument(
                "pendulum mass ratio makes the dynamics denominator vanish".into(),
            ));
        }
        Ok(self)
    }

    fn denominator(&self, x1: f64) -> f64 {
        let total = self.cart_mass + self.pendulum_mass;
        self.half_length * (4.0 / 3.0 - self.pendulum_mass * x1.cos().powi(2) / total)
    }

    /// Drift f(x): gravity and centripetal terms of the angle dynamics.
    pub fn drift(&self, x1: f64, x2: f64) -> f64 {
        let total = self.cart_mass + self.pendulum_mass;
        let numerator = self.gravity * x1.sin()
            - self.pendulum_mass * self.half_length * x2 * x2 * x1.cos() * x1.sin() / total;
        numerator / self.denominator(x1)
    }

    /// Input gain g(x); vanishes at x1 = +/- pi/2.
    pub fn input_gain(&self, x1: f64) -> f64 {
        let total = self.cart_mass + self.pendulum_mass;
        (x1.cos() / total) / self.denominator(x1)
    }
}

/// Angle-subsystem dynamics: returns (x2, f(x) + g(x) u).
pub fn pendulum_dynamics(x: [f64; 2], u: f64, params: &PendulumParams) -> Result<[f64; 2]> {
    if !x[0].is_finite() || !x[1].is_finite() || !u.is_finite() {
        return Err(Error::InvalidArgument("non-finite state or input".into()));
    }
    let d = params.drift(x[0], x[1]) + params.input_gain(x[0]) * u;
    Ok([x[1], d])
}

/// Sinusoidal reference `amplitude * sin(angular_freq * t)` with exact
/// analytic derivatives of every order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub amplitude: f64,
    pub angular_freq: f64,
}

impl Reference {
    /// Benchmark reference y_d(t) = 0.1 sin(pi t).
    pub fn benchmark() -> Self {
        Self { amplitude: 0.1, angular_freq: PI }
    }

    /// order-th derivative of the reference at time t.
    pub fn signal(&self, t: f64, order: usize) -> f64 {
        let scale = self.amplitude * self.angular_freq.powi(order as i32);
        let phase = self.angular_freq * t;
        match order % 4 {
            0 => scale * phase.sin(),
            1 => scale * phase.cos(),
            2 => -scale * phase.sin(),
            _ => -scale * phase.cos(),
        }
    }

    /// e_i = x_i - y_d^(i-1)(t), componentwise.
    pub fn tracking_error(&self, x: &[f64], t: f64) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(i, xi)| xi - self.signal(t, i))
            .collect()
    }
}
