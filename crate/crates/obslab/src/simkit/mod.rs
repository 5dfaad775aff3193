//! Fixed-step closed-loop simulation engine.
//!
//! One `run_closed_loop` call advances the coupled system (plant, estimator,
//! adaptive parameters, and optionally a shadow high-gain structure) on a
//! single time grid. Per raw step: sample the measurement noise, form y,
//! compute the control from start-of-step information (zero-order hold),
//! then take one Runge-Kutta step of everything at once with the control and
//! noise frozen. Traces are decimated on the way out.

mod integrate;
mod noise;
mod trace;

pub use integrate::rk4_step;
pub use noise::NoiseSource;
pub use trace::SimTrace;

use crate::approximators::{
    fuzzy_adapt_rhs, fuzzy_basis, fuzzy_output, rbf_adapt_rhs, rbf_output, MembershipGrid,
    RbfLayout,
};
use crate::control::{
    adaptive_control, differentiator_control, full_state_control, observer_control,
    phi_diagnostic, BoundSet, ControlCommand, GainVector, PhiVariant,
};
use crate::error::{Error, Result};
use crate::estimators::{
    clamp_estimates, differentiator_rhs, observer_rhs, uncertainty_from_differentiator,
    EstimatorGains,
};
use crate::numkit::{companion_from_gains, polynomial_roots, LyapunovPair, Matrix};
use crate::plant::{PlantModel, Reference};

/// Hard ceiling on raw steps per run.
pub const STEP_BUDGET: f64 = 1e8;

/// Which control law closes the loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControllerKind {
    FullState,
    Fuzzy,
    Rbf,
    Differentiator,
    Observer,
}

impl ControllerKind {
    pub fn needs_estimator(&self) -> bool {
        matches!(self, ControllerKind::Differentiator | ControllerKind::Observer)
    }

    pub fn needs_approximator(&self) -> bool {
        matches!(self, ControllerKind::Fuzzy | ControllerKind::Rbf)
    }
}

/// Adaptive approximator attached to a baseline controller.
#[derive(Debug, Clone, PartialEq)]
pub enum ApproximatorConfig {
    Fuzzy { grid: MembershipGrid, gamma: f64, theta0: f64, q_scale: f64 },
    Rbf { layout: RbfLayout, gamma: f64, w0: f64, q_scale: f64 },
}

impl ApproximatorConfig {
    fn q_scale(&self) -> f64 {
        match self {
            ApproximatorConfig::Fuzzy { q_scale, .. } | ApproximatorConfig::Rbf { q_scale, .. } => {
                *q_scale
            }
        }
    }

    fn initial_parameters(&self) -> Vec<f64> {
        match self {
            ApproximatorConfig::Fuzzy { grid, theta0, .. } => vec![*theta0; grid.rule_count()],
            ApproximatorConfig::Rbf { layout, w0, .. } => vec![*w0; layout.node_count()],
        }
    }
}

/// Bounded measurement noise specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub amplitude: f64,
    pub seed: u64,
}

/// A fully resolved, runnable scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub plant: PlantModel,
    pub reference: Reference,
    pub controller: ControllerKind,
    pub gains: GainVector,
    /// Control saturation level.
    pub l_u: f64,
    pub estimator: Option<EstimatorGains>,
    pub approximator: Option<ApproximatorConfig>,
    pub t_end: f64,
    pub step: f64,
    /// Record every `decimate`-th raw step (the final step is always kept).
    pub decimate: usize,
    pub noise: Option<NoiseSpec>,
    pub initial_state: Vec<f64>,
    /// Co-integrate a classical high-gain structure on the same measurement.
    pub shadow_highgain: bool,
    /// Peaking-guard box applied to controller inputs during the first
    /// 10 * epsilon seconds.
    pub clamp_bound: f64,
}

impl Scenario {
    fn validate(&self) -> Result<u64> {
        let n = self.plant.order();
        if !(self.step.is_finite() && self.step > 0.0 && self.t_end.is_finite() && self.t_end > 0.0)
        {
            return Err(Error::InvalidArgument(format!(
                "step and t_end must be positive, got h={}, t_end={}",
                self.step, self.t_end
            )));
        }
        let raw = self.t_end / self.step;
        if raw > STEP_BUDGET {
            return Err(Error::BudgetExceeded { steps: raw });
        }
        let steps = raw.round().max(1.0) as u64;
        if self.decimate == 0 {
            return Err(Error::InvalidArgument("decimation factor must be >= 1".into()));
        }
        if self.initial_state.len() != n {
            return Err(Error::InvalidArgument(format!(
                "initial state has length {}, plant order is {n}",
                self.initial_state.len()
            )));
        }
        if self.gains.order() != n {
            return Err(Error::InvalidArgument(format!(
                "gain vector has length {}, plant order is {n}",
                self.gains.order()
            )));
        }
        if self.l_u.is_nan() || self.l_u <= 0.0 {
            return Err(Error::InvalidArgument("saturation level must be positive".into()));
        }
        match (&self.controller, &self.estimator) {
            (kind, Some(est)) if kind.needs_estimator() => {
                if est.order() != n {
                    return Err(Error::InvalidArgument(format!(
                        "estimator order {} does not match plant order {n}",
                        est.order()
                    )));
                }
                let bound = stability_step_bound(est);
                if self.step > bound {
                    return Err(Error::InvalidArgument(format!(
                        "step {:.3e} exceeds the stability bound {bound:.3e} for epsilon = {}",
                        self.step,
                        est.epsilon()
                    )));
                }
            }
            (kind, None) if kind.needs_estimator() => {
                return Err(Error::InvalidArgument(
                    "differentiator/observer controllers need estimator gains".into(),
                ));
            }
            _ => {}
        }
        match (&self.controller, &self.approximator) {
            (ControllerKind::Fuzzy, Some(ApproximatorConfig::Fuzzy { grid, gamma, .. })) => {
                if grid.n_dims() != n {
                    return Err(Error::InvalidArgument(format!(
                        "fuzzy grid covers {} dimensions, plant order is {n}",
                        grid.n_dims()
                    )));
                }
                if gamma.is_nan() || *gamma <= 0.0 {
                    return Err(Error::InvalidArgument("adaptation gain must be positive".into()));
                }
            }
            (ControllerKind::Rbf, Some(ApproximatorConfig::Rbf { gamma, .. })) => {
                if gamma.is_nan() || *gamma <= 0.0 {
                    return Err(Error::InvalidArgument("adaptation gain must be positive".into()));
                }
            }
            (kind, _) if kind.needs_approximator() => {
                return Err(Error::InvalidArgument(
                    "fuzzy/RBF controllers need a matching approximator config".into(),
                ));
            }
            _ => {}
        }
        if self.shadow_highgain && self.estimator.is_none() {
            return Err(Error::InvalidArgument(
                "shadow high-gain structure needs estimator gains".into(),
            ));
        }
        Ok(steps)
    }
}

/// Largest step the fixed-step integrator tolerates for an estimator's
/// linear part: 2.5 over the magnitude of its fastest eigenvalue. The
/// eigenvalues are the roots of the unscaled a-polynomial divided by epsilon.
pub fn stability_step_bound(gains: &EstimatorGains) -> f64 {
    let roots = polynomial_roots(&gains.sigma_polynomial())
        .expect("Hurwitz estimator polynomial roots converge");
    let max_sigma = roots.iter().map(|r| r.norm()).fold(0.0f64, f64::max);
    2.5 * gains.epsilon() / max_sigma
}

/// Advance the coupled closed-loop system and record a decimated trace.
pub fn run_closed_loop(scenario: &Scenario) -> Result<SimTrace> {
    let steps = scenario.validate()?;
    let n = scenario.plant.order();
    let h = scenario.step;
    let plant = &scenario.plant;
    let reference = scenario.reference;
    let gains = &scenario.gains;
    let bounds = BoundSet::sample(plant, gains, &reference, scenario.l_u);

    let est = scenario.estimator.as_ref().filter(|_| scenario.controller.needs_estimator());
    let shadow = scenario.shadow_highgain && est.is_some();
    let approx = scenario.approximator.as_ref().filter(|_| scenario.controller.needs_approximator());

    // Lyapunov pair for the adaptation laws, solved against the companion
    // form of the active gain vector.
    let pair = match approx {
        Some(config) => {
            let (lambda, _) = companion_from_gains(gains.k())?;
            let q = Matrix::scaled_identity(n, config.q_scale());
            Some(LyapunovPair::solve(&lambda, q)?)
        }
        None => None,
    };

    // Flat state layout: [x, xhat?, wfilt?, xhg?, theta?]. The wfilt block
    // is the twin integral chain the differentiator controller uses to
    // subtract the control contribution at matched lag: driven by g(x) u,
    // its first state is that contribution filtered exactly as the
    // differentiator filters the measured acceleration. Subtracting the raw
    // previous control instead closes an unstable unit-gain loop through
    // the hold (the update u_k = u_{k-1} + (1/g)(y_d^(n) - xhat_{n+1} - K e)
    // integrates at the raw step rate, far beyond the estimator bandwidth).
    let est_len = if est.is_some() { n + 1 } else { 0 };
    let with_filter = scenario.controller == ControllerKind::Differentiator;
    let filter_off = n + est_len;
    let filter_len = if with_filter { n + 1 } else { 0 };
    let shadow_off = filter_off + filter_len;
    let shadow_len = if shadow { n + 1 } else { 0 };
    let theta_off = shadow_off + shadow_len;
    let theta_init = approx.map(|c| c.initial_parameters()).unwrap_or_default();
    let theta_len = theta_init.len();

    let mut state = Vec::with_capacity(theta_off + theta_len);
    state.extend_from_slice(&scenario.initial_state);
    state.extend(std::iter::repeat_n(0.0, est_len + filter_len + shadow_len));
    state.extend_from_slice(&theta_init);

    let mut noise = scenario.noise.map(|spec| NoiseSource::new(spec.amplitude, spec.seed));
    let samples_hint = (steps as usize / scenario.decimate) + 2;
    let mut out =
        SimTrace::with_capacity(n, est.is_some(), shadow, theta_len, samples_hint);

    let mut u_prev = 0.0f64;
    for k in 0..=steps {
        let t = k as f64 * h;
        let w = noise.as_mut().map_or(0.0, NoiseSource::sample);
        let y = state[0] + w;
        if k == 0 {
            // Estimators start pinned to the first measurement.
            if est.is_some() {
                state[n] = y;
            }
            if shadow {
                state[shadow_off] = y;
            }
        }

        let x = state[..n].to_vec();
        let f_true = plant.drift(&x);
        let filtered_contribution =
            if with_filter { Some(state[filter_off]) } else { None };
        let (cmd, f_hat) = compute_control(
            scenario,
            est,
            approx,
            pair.as_ref(),
            &state,
            &x,
            t,
            filtered_contribution,
            &bounds,
        )?;

        let record = k % scenario.decimate as u64 == 0 || k == steps;
        if record {
            out.t.push(t);
            for (col, v) in out.x.iter_mut().zip(&x) {
                col.push(*v);
            }
            out.y.push(y);
            for (order, col) in out.reference.iter_mut().enumerate() {
                col.push(reference.signal(t, order));
            }
            for (i, col) in out.errors.iter_mut().enumerate() {
                col.push(x[i] - reference.signal(t, i));
            }
            out.u.push(cmd.u);
            out.saturated.push(if cmd.saturated { 1.0 } else { 0.0 });
            out.f_true.push(f_true);
            out.f_hat.push(f_hat);
            if est.is_some() {
                let xhat = &state[n..n + est_len];
                for (i, col) in out.xhat.iter_mut().enumerate() {
                    col.push(xhat[i]);
                }
                for (i, col) in out.z.iter_mut().enumerate() {
                    let zi = if i < n {
                        xhat[i] - x[i]
                    } else if scenario.controller == ControllerKind::Observer {
                        xhat[n] - f_true
                    } else {
                        f_hat - f_true
                    };
                    col.push(zi);
                }
                let variant = if scenario.controller == ControllerKind::Observer {
                    PhiVariant::Observer
                } else {
                    PhiVariant::Differentiator
                };
                let f_ref = if variant == PhiVariant::Observer {
                    f_true
                } else {
                    f_true + plant.input_gain(&x) * u_prev
                };
                out.phi.push(phi_diagnostic(
                    f_ref, xhat[n], &x, &xhat[..n], gains, &bounds, variant,
                )?);
            }
            if shadow {
                for (i, col) in out.xhg.iter_mut().enumerate() {
                    col.push(state[shadow_off + i]);
                }
            }
            for (i, col) in out.theta.iter_mut().enumerate() {
                col.push(state[theta_off + i]);
            }
        }

        if k == steps {
            break;
        }

        let rhs = |tau: f64, s: &[f64]| -> Result<Vec<f64>> {
            let mut d = vec![0.0; s.len()];
            let xs = &s[..n];
            d[..n - 1].copy_from_slice(&xs[1..]);
            d[n - 1] = plant.drift(xs) + plant.input_gain(xs) * cmd.u;
            if let Some(est) = est {
                let xh = &s[n..n + est_len];
                let y_stage = xs[0] + w;
                let dxh = match scenario.controller {
                    ControllerKind::Differentiator => differentiator_rhs(xh, y_stage, est),
                    ControllerKind::Observer => {
                        let g_hat = plant.input_gain(&xh[..n]);
                        observer_rhs(xh, y_stage, cmd.u, g_hat, est)
                    }
                    _ => unreachable!("estimator only present for estimator controllers"),
                };
                d[n..n + est_len].copy_from_slice(&dxh);
                if with_filter {
                    // Twin chain fed by the instantaneous control contribution.
                    let wf = &s[filter_off..filter_off + filter_len];
                    let p = plant.input_gain(xs) * cmd.u;
                    let dwf = differentiator_rhs(wf, p, est);
                    d[filter_off..filter_off + filter_len].copy_from_slice(&dwf);
                }
                if shadow {
                    let xg = &s[shadow_off..shadow_off + shadow_len];
                    let dxg = observer_rhs(xg, y_stage, 0.0, 0.0, est);
                    d[shadow_off..shadow_off + shadow_len].copy_from_slice(&dxg);
                }
            }
            if let Some(config) = approx {
                let pair = pair.as_ref().expect("pair solved when approximator present");
                let e = reference.tracking_error(xs, tau);
                let dtheta = match config {
                    ApproximatorConfig::Fuzzy { grid, gamma, .. } => {
                        let xi = fuzzy_basis(xs, grid)?;
                        fuzzy_adapt_rhs(&e, pair, &xi, *gamma)?
                    }
                    ApproximatorConfig::Rbf { layout, gamma, .. } => {
                        let hb = layout.basis(&e);
                        rbf_adapt_rhs(&e, pair, &hb, *gamma)?
                    }
                };
                d[theta_off..theta_off + theta_len].copy_from_slice(&dtheta);
            }
            Ok(d)
        };

        state = rk4_step(rhs, t, &state, h)?;
        u_prev = cmd.u;
    }

    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn compute_control(
    scenario: &Scenario,
    est: Option<&EstimatorGains>,
    approx: Option<&ApproximatorConfig>,
    pair: Option<&LyapunovPair>,
    state: &[f64],
    x: &[f64],
    t: f64,
    filtered_contribution: Option<f64>,
    bounds: &BoundSet,
) -> Result<(ControlCommand, f64)> {
    let n = scenario.plant.order();
    let reference = &scenario.reference;
    let gains = &scenario.gains;
    match scenario.controller {
        ControllerKind::FullState => {
            let cmd = full_state_control(x, t, gains, &scenario.plant, reference, bounds);
            Ok((cmd, scenario.plant.drift(x)))
        }
        ControllerKind::Fuzzy => {
            let Some(ApproximatorConfig::Fuzzy { grid, .. }) = approx else {
                unreachable!("validated");
            };
            let _ = pair;
            let xi = fuzzy_basis(x, grid)?;
            let theta = &state[state.len() - xi.len()..];
            let f_hat = fuzzy_output(theta, &xi)?;
            let g = scenario.plant.input_gain(x);
            Ok((adaptive_control(f_hat, x, t, gains, g, reference, bounds), f_hat))
        }
        ControllerKind::Rbf => {
            let Some(ApproximatorConfig::Rbf { layout, .. }) = approx else {
                unreachable!("validated");
            };
            let e = reference.tracking_error(x, t);
            let hb = layout.basis(&e);
            let theta = &state[state.len() - hb.len()..];
            let f_hat = rbf_output(theta, &hb)?;
            let g = scenario.plant.input_gain(x);
            Ok((adaptive_control(f_hat, x, t, gains, g, reference, bounds), f_hat))
        }
        ControllerKind::Differentiator => {
            let est = est.expect("validated");
            let xhat = &state[n..n + est.order() + 1];
            let clamped = clamp_estimates(xhat, t, est, scenario.clamp_bound);
            let g_hat = scenario.plant.input_gain(&clamped[..n]);
            // The control contribution g u enters as its lag-matched filtered
            // value, expressed through the documented (g_hat, u_prev) pair.
            let u_held = filtered_contribution.expect("filter present for differentiator runs")
                / g_hat;
            let f_hat = uncertainty_from_differentiator(clamped[n], g_hat, u_held);
            let cmd =
                differentiator_control(&clamped, t, gains, g_hat, u_held, reference, bounds);
            Ok((cmd, f_hat))
        }
        ControllerKind::Observer => {
            let est = est.expect("validated");
            let xhat = &state[n..n + est.order() + 1];
            let clamped = clamp_estimates(xhat, t, est, scenario.clamp_bound);
            let g_hat = scenario.plant.input_gain(&clamped[..n]);
            let cmd = observer_control(&clamped, t, gains, g_hat, reference, bounds);
            Ok((cmd, clamped[n]))
        }
    }
}

/// Run a batch of scenarios one after another.
pub fn run_scenarios_sequential(scenarios: &[Scenario]) -> Vec<Result<SimTrace>> {
    scenarios.iter().map(run_closed_loop).collect()
}

fn run_timed(scenario: &Scenario) -> (Result<SimTrace>, f64) {
    let started = std::time::Instant::now();
    let result = run_closed_loop(scenario);
    (result, started.elapsed().as_secs_f64())
}

/// Batch runner that also reports each run's wall time in seconds.
#[cfg(feature = "parallel")]
pub fn run_scenarios_timed(
    scenarios: &[Scenario],
    threads: Option<usize>,
) -> Vec<(Result<SimTrace>, f64)> {
    use rayon::prelude::*;
    let workers = threads
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| scenarios.par_iter().map(run_timed).collect()),
        Err(_) => scenarios.iter().map(run_timed).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn run_scenarios_timed(
    scenarios: &[Scenario],
    _threads: Option<usize>,
) -> Vec<(Result<SimTrace>, f64)> {
    scenarios.iter().map(run_timed).collect()
}

/// Run a batch of scenarios on a bounded worker pool. Results come back in
/// input order. With the `parallel` feature disabled this falls back to the
/// sequential path.
#[cfg(feature = "parallel")]
pub fn run_scenarios_parallel(
    scenarios: &[Scenario],
    threads: Option<usize>,
) -> Vec<Result<SimTrace>> {
    use rayon::prelude::*;
    let workers = threads
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| scenarios.par_iter().map(run_closed_loop).collect()),
        Err(_) => run_scenarios_sequential(scenarios),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn run_scenarios_parallel(
    scenarios: &[Scenario],
    _threads: Option<usize>,
) -> Vec<Result<SimTrace>> {
    run_scenarios_sequential(scenarios)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plant::PendulumParams;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    pub(crate) fn full_state_scenario() -> Scenario {
        Scenario {
            plant: PlantModel::pendulum(PendulumParams::benchmark()),
            reference: Reference::benchmark(),
            controller: ControllerKind::FullState,
            gains: GainVector::new(vec![20.0, 10.0]).unwrap(),
            l_u: 50.0,
            estimator: None,
            approximator: None,
            t_end: 1.0,
            step: 1e-3,
            decimate: 10,
            noise: None,
            initial_state: vec![PI / 60.0, 0.0],
            shadow_highgain: false,
            clamp_bound: 1e3,
        }
    }

    fn differentiator_scenario() -> Scenario {
        Scenario {
            controller: ControllerKind::Differentiator,
            estimator: Some(EstimatorGains::new(0.01, vec![10.0, 10.0, 10.0]).unwrap()),
            step: 1e-4,
            ..full_state_scenario()
        }
    }

    #[test]
    fn stability_bound_examples() {
        let g = EstimatorGains::new(0.01, vec![10.0, 10.0, 10.0]).unwrap();
        // Newton on the cubic sigma^3 + 10 sigma^2 + 10 sigma + 10 finds the
        // dominant real root near -9.014; the bound is 2.5 eps over that.
        let mut r: f64 = -9.0;
        for _ in 0..60 {
            let f = r * r * r + 10.0 * r * r + 10.0 * r + 10.0;
            let df = 3.0 * r * r + 20.0 * r + 10.0;
            r -= f / df;
        }
        let expect = 2.5 * 0.01 / r.abs();
        assert_relative_eq!(stability_step_bound(&g), expect, max_relative = 1e-8);

        let half = EstimatorGains::new(0.005, vec![10.0, 10.0, 10.0]).unwrap();
        assert_relative_eq!(
            stability_step_bound(&half),
            stability_step_bound(&g) / 2.0,
            max_relative = 1e-12
        );

        let first_order = EstimatorGains::new(0.2, vec![1.0]).unwrap();
        assert_relative_eq!(stability_step_bound(&first_order), 2.5 * 0.2, max_relative = 1e-12);
    }

    #[test]
    fn zero_duration_yields_two_samples() {
        let mut s = full_state_scenario();
        s.t_end = s.step;
        let trace = run_closed_loop(&s).unwrap();
        assert_eq!(trace.len(), 2);
        assert_relative_eq!(trace.x[0][0], PI / 60.0, epsilon = 1e-15);
        assert_relative_eq!(trace.x[1][0], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn determinism_bitwise() {
        let mut s = differentiator_scenario();
        s.noise = Some(NoiseSpec { amplitude: 0.01, seed: 99 });
        s.t_end = 0.2;
        let a = run_closed_loop(&s).unwrap();
        let b = run_closed_loop(&s).unwrap();
        assert_eq!(a, b);
        for ((_, ca), (_, cb)) in a.columns().iter().zip(b.columns().iter()) {
            for (va, vb) in ca.iter().zip(cb.iter()) {
                assert_eq!(va.to_bits(), vb.to_bits());
            }
        }
    }

    #[test]
    fn zero_amplitude_noise_equals_no_noise() {
        let mut with = differentiator_scenario();
        with.t_end = 0.2;
        with.noise = Some(NoiseSpec { amplitude: 0.0, seed: 7 });
        let mut without = differentiator_scenario();
        without.t_end = 0.2;
        without.noise = None;
        assert_eq!(run_closed_loop(&with).unwrap(), run_closed_loop(&without).unwrap());
    }

    #[test]
    fn control_is_zero_order_hold() {
        // At every recorded instant the logged u must re-derive from the
        // logged start-of-step information.
        let mut s = full_state_scenario();
        s.decimate = 1;
        s.t_end = 0.05;
        let trace = run_closed_loop(&s).unwrap();
        let bounds = BoundSet::sample(&s.plant, &s.gains, &s.reference, s.l_u);
        for k in 0..trace.len() {
            let x = [trace.x[0][k], trace.x[1][k]];
            let cmd = full_state_control(&x, trace.t[k], &s.gains, &s.plant, &s.reference, &bounds);
            assert_relative_eq!(trace.u[k], cmd.u, epsilon = 1e-12);
        }
    }

    #[test]
    fn estimator_order_must_match_plant_order() {
        let mut s = differentiator_scenario();
        s.estimator = Some(EstimatorGains::new(0.05, vec![1.0, 2.0]).unwrap()); // order 1
        let err = run_closed_loop(&s).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(msg) if msg.contains("order")));
    }

    #[test]
    fn step_above_stability_bound_rejected() {
        let mut s = differentiator_scenario();
        s.step = 1e-2;
        let err = run_closed_loop(&s).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(msg) if msg.contains("stability bound")));
    }

    #[test]
    fn budget_guard_trips() {
        let mut s = full_state_scenario();
        s.step = 1e-9;
        s.t_end = 1e3;
        assert!(matches!(run_closed_loop(&s), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn uncontrolled_pendulum_stays_bounded() {
        // Free swing from near-upright: the swing rate must stay within the
        // energy-conserving envelope over 10 s (no numerical energy pump).
        let params = PendulumParams::benchmark();
        let mut x = vec![PI / 60.0, 0.0];
        let h = 1e-4;
        for k in 0..100_000 {
            x = rk4_step(
                |_, s| Ok(vec![s[1], params.drift(s[0], s[1])]),
                k as f64 * h,
                &x,
                h,
            )
            .unwrap();
            assert!(x[1].abs() < 15.0, "swing rate {} at step {k}", x[1]);
        }
    }

    #[test]
    fn step_halving_shows_fourth_order() {
        // Pure plant integration (no hold effects): observed order >= 3.5.
        let params = PendulumParams::benchmark();
        let run = |h: f64| {
            let steps = (1.0 / h).round() as usize;
            let mut x = vec![PI / 60.0, 0.0];
            for k in 0..steps {
                x = rk4_step(
                    |_, s| Ok(vec![s[1], params.drift(s[0], s[1])]),
                    k as f64 * h,
                    &x,
                    h,
                )
                .unwrap();
            }
            x
        };
        let a = run(2e-3);
        let b = run(1e-3);
        let c = run(5e-4);
        let d1 = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
        let d2 = ((b[0] - c[0]).powi(2) + (b[1] - c[1]).powi(2)).sqrt();
        let order = (d1 / d2).log2();
        assert!(order >= 3.5, "observed order {order:.2}");
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let mut scenarios = Vec::new();
        for eps in [0.05, 0.04, 0.03] {
            let mut s = differentiator_scenario();
            s.estimator = Some(EstimatorGains::new(eps, vec![10.0, 10.0, 10.0]).unwrap());
            s.t_end = 0.1;
            s.step = 1e-3;
            scenarios.push(s);
        }
        let seq = run_scenarios_sequential(&scenarios);
        let par = run_scenarios_parallel(&scenarios, Some(2));
        for (a, b) in seq.iter().zip(par.iter()) {
            assert_eq!(a.as_ref().unwrap(), b.as_ref().unwrap());
        }
    }
}
