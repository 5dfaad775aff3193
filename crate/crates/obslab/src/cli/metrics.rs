//! Scalar quality metrics computed from a trace alone, so any reader of the
//! exported CSV can reproduce them.

use serde::Serialize;

use crate::simkit::SimTrace;

#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    /// Start of the settled window the tracking metrics use.
    pub settle_time: f64,
    /// RMS of e_1 over the settled window.
    pub rms_e1: f64,
    /// Max |e_1| over the settled window.
    pub max_e1_after_settle: f64,
    /// RMS of the true drift over the settled window.
    pub f_rms: f64,
    /// RMS of f_hat - f over the settled window.
    pub fhat_rms_error: f64,
    /// fhat_rms_error / f_rms.
    pub fhat_error_ratio: f64,
    /// Fraction of samples with the saturation flag set.
    pub saturation_duty: f64,
    /// RMS of ||z|| over the steady window (estimator runs only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observer_steady_z: Option<f64>,
    /// Std of first-differenced xhat_2 over the settled window: the
    /// high-frequency jitter the measurement noise induces in the velocity
    /// estimate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jitter_xhat2: Option<f64>,
    /// Same jitter for the shadow classical high-gain structure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jitter_xhg2: Option<f64>,
}

fn rms(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for v in values {
        sum += v * v;
        count += 1;
    }
    if count == 0 {
        0.0
    } else {
        (sum / count as f64).sqrt()
    }
}

fn std_of_first_differences(values: &[f64]) -> f64 {
    if values.len() < 3 {
        return 0.0;
    }
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
    (diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / diffs.len() as f64).sqrt()
}

impl MetricsReport {
    pub fn from_trace(trace: &SimTrace) -> Self {
        let t_end = trace.t.last().copied().unwrap_or(0.0);
        let settle = (t_end / 2.0).min(2.0);
        let settled: Vec<usize> =
            (0..trace.len()).filter(|&i| trace.t[i] > settle).collect();
        let window = |col: &[f64]| -> Vec<f64> { settled.iter().map(|&i| col[i]).collect() };

        let e1 = window(&trace.errors[0]);
        let rms_e1 = rms(e1.iter().copied());
        let max_e1 = e1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let f_window = window(&trace.f_true);
        let f_rms = rms(f_window.iter().copied());
        let fhat_err = rms(
            settled
                .iter()
                .map(|&i| trace.f_hat[i] - trace.f_true[i]),
        );
        let duty = if trace.is_empty() {
            0.0
        } else {
            trace.saturated.iter().sum::<f64>() / trace.len() as f64
        };

        let observer_steady_z = if trace.z.is_empty() {
            None
        } else {
            // Steady window: [5, 10] when the run is long enough, otherwise
            // the second half of the run.
            let (w0, w1) = if t_end >= 10.0 { (5.0, 10.0) } else { (t_end / 2.0, t_end) };
            let norms = (0..trace.len()).filter(|&i| trace.t[i] >= w0 && trace.t[i] <= w1).map(
                |i| {
                    trace
                        .z
                        .iter()
                        .map(|col| col[i] * col[i])
                        .sum::<f64>()
                        .sqrt()
                },
            );
            Some(rms(norms))
        };

        let jitter_xhat2 = trace.xhat.get(1).map(|col| std_of_first_differences(&window(col)));
        let jitter_xhg2 = trace.xhg.get(1).map(|col| std_of_first_differences(&window(col)));

        MetricsReport {
            settle_time: settle,
            rms_e1,
            max_e1_after_settle: max_e1,
            f_rms,
            fhat_rms_error: fhat_err,
            fhat_error_ratio: if f_rms > 0.0 { fhat_err / f_rms } else { f64::NAN },
            saturation_duty: duty,
            observer_steady_z,
            jitter_xhat2,
            jitter_xhg2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jitter_of_linear_ramp_is_zero() {
        let ramp: Vec<f64> = (0..100).map(|k| 0.5 * k as f64).collect();
        assert!(std_of_first_differences(&ramp) < 1e-12);
    }

    #[test]
    fn rms_of_constant() {
        assert!((rms([2.0, 2.0, 2.0].into_iter()) - 2.0).abs() < 1e-15);
        assert_eq!(rms(std::iter::empty()), 0.0);
    }
}
