//! Fixed-step classical Runge-Kutta integration.

use crate::error::{Error, Result};

/// One classical 4th-order Runge-Kutta update of `state` over [t, t + h].
///
/// The right-hand side may reject a stage (e.g. a degenerate basis
/// evaluation); non-finite stage values fail with the time stamp.
pub fn rk4_step<F>(rhs: F, t: f64, state: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
{
    let check = |v: &[f64]| -> Result<()> {
        if v.iter().any(|x| !x.is_finite()) {
            Err(Error::IntegrationDiverged { t })
        } else {
            Ok(())
        }
    };

    let k1 = rhs(t, state)?;
    check(&k1)?;
    let mid1: Vec<f64> = state.iter().zip(&k1).map(|(s, k)| s + 0.5 * h * k).collect();
    let k2 = rhs(t + 0.5 * h, &mid1)?;
    check(&k2)?;
    let mid2: Vec<f64> = state.iter().zip(&k2).map(|(s, k)| s + 0.5 * h * k).collect();
    let k3 = rhs(t + 0.5 * h, &mid2)?;
    check(&k3)?;
    let end: Vec<f64> = state.iter().zip(&k3).map(|(s, k)| s + h * k).collect();
    let k4 = rhs(t + h, &end)?;
    check(&k4)?;

    let next: Vec<f64> = state
        .iter()
        .enumerate()
        .map(|(i, s)| s + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    check(&next)?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_state_for_zero_rhs() {
        let next = rk4_step(|_, s| Ok(vec![0.0; s.len()]), 0.0, &[3.5], 0.1).unwrap();
        assert_eq!(next, vec![3.5]);
    }

    #[test]
    fn exponential_decay_hand_value() {
        // x' = -x, x0 = 1, h = 0.1: stages -1, -0.95, -0.9525, -0.90475.
        let next = rk4_step(|_, s| Ok(vec![-s[0]]), 0.0, &[1.0], 0.1).unwrap();
        assert_relative_eq!(next[0], 0.9048375, epsilon = 1e-12);
    }

    #[test]
    fn exact_for_constant_rate() {
        let next = rk4_step(|_, _| Ok(vec![1.0]), 0.0, &[0.0], 0.1).unwrap();
        assert_relative_eq!(next[0], 0.1, epsilon = 1e-16);
    }

    #[test]
    fn divergence_carries_time_stamp() {
        let err = rk4_step(|_, s| Ok(vec![s[0] * f64::INFINITY]), 2.5, &[1.0], 0.1).unwrap_err();
        assert_eq!(err, Error::IntegrationDiverged { t: 2.5 });
    }

    #[test]
    fn fourth_order_on_smooth_problem() {
        // Integrate x' = x over [0, 1] and watch the error fall ~16x per halving.
        let run = |h: f64| {
            let steps = (1.0 / h).round() as usize;
            let mut x = vec![1.0];
            for k in 0..steps {
                x = rk4_step(|_, s| Ok(vec![s[0]]), k as f64 * h, &x, h).unwrap();
            }
            (x[0] - 1f64.exp()).abs()
        };
        let e1 = run(0.1);
        let e2 = run(0.05);
        let order = (e1 / e2).log2();
        assert!(order > 3.5, "observed order {order:.2}");
    }
}
