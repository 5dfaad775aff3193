//! Time-indexed simulation records.

/// Decimated record of a closed-loop run. All columns share the length of
/// `t`; optional column groups are empty when the scenario has no estimator,
/// shadow structure, or adaptive parameters.
///
/// For estimator runs `z` holds the estimate errors: z_i = xhat_i - x_i for
/// the state channels, and for the top channel xhat_{n+1} minus its target
/// (the drift f(x) for the observer; for the differentiator the logged value
/// is f_hat - f, which the state-channel convention reduces to).
#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    pub order: usize,
    pub t: Vec<f64>,
    /// True states, one column per x_i.
    pub x: Vec<Vec<f64>>,
    /// Noisy measurement fed to the estimators.
    pub y: Vec<f64>,
    /// Reference derivatives y_d^(0) ... y_d^(n).
    pub reference: Vec<Vec<f64>>,
    /// Tracking errors e_i = x_i - y_d^(i-1).
    pub errors: Vec<Vec<f64>>,
    /// Zero-order-hold control applied from each sample onward.
    pub u: Vec<f64>,
    /// 1.0 where the raw command hit the saturation level.
    pub saturated: Vec<f64>,
    /// True drift f(x) along the trajectory.
    pub f_true: Vec<f64>,
    /// The uncertainty estimate the controller used.
    pub f_hat: Vec<f64>,
    /// Raw (unclamped) estimator states, when an estimator runs.
    pub xhat: Vec<Vec<f64>>,
    /// Estimate errors, when an estimator runs.
    pub z: Vec<Vec<f64>>,
    /// Shadow classical high-gain states, when co-integrated.
    pub xhg: Vec<Vec<f64>>,
    /// Adaptive parameters (fuzzy theta or RBF weights), when present.
    pub theta: Vec<Vec<f64>>,
    /// Forcing-magnitude diagnostic, when an estimator runs.
    pub phi: Vec<f64>,
}

impl SimTrace {
    pub(crate) fn with_capacity(
        order: usize,
        estimator: bool,
        shadow: bool,
        theta_len: usize,
        samples: usize,
    ) -> Self {
        let col = || Vec::with_capacity(samples);
        let cols = |k: usize| (0..k).map(|_| Vec::with_capacity(samples)).collect::<Vec<_>>();
        let est_cols = if estimator { order + 1 } else { 0 };
        Self {
            order,
            t: col(),
            x: cols(order),
            y: col(),
            reference: cols(order + 1),
            errors: cols(order),
            u: col(),
            saturated: col(),
            f_true: col(),
            f_hat: col(),
            xhat: cols(est_cols),
            z: cols(est_cols),
            xhg: cols(if shadow { order + 1 } else { 0 }),
            theta: cols(theta_len),
            phi: if estimator { col() } else { Vec::new() },
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// All columns in the frozen export order, paired with their names.
    pub fn columns(&self) -> Vec<(String, &[f64])> {
        let mut out: Vec<(String, &[f64])> = vec![("t".into(), self.t.as_slice())];
        for (i, c) in self.x.iter().enumerate() {
            out.push((format!("x{}", i + 1), c));
        }
        out.push(("y".into(), &self.y));
        for (i, c) in self.reference.iter().enumerate() {
            out.push((format!("yd{i}"), c));
        }
        for (i, c) in self.errors.iter().enumerate() {
            out.push((format!("e{}", i + 1), c));
        }
        out.push(("u".into(), &self.u));
        out.push(("saturated".into(), &self.saturated));
        out.push(("f_true".into(), &self.f_true));
        out.push(("f_hat".into(), &self.f_hat));
        for (i, c) in self.xhat.iter().enumerate() {
            out.push((format!("xhat{}", i + 1), c));
        }
        for (i, c) in self.z.iter().enumerate() {
            out.push((format!("z{}", i + 1), c));
        }
        for (i, c) in self.xhg.iter().enumerate() {
            out.push((format!("xhg{}", i + 1), c));
        }
        for (i, c) in self.theta.iter().enumerate() {
            out.push((format!("theta{}", i + 1), c));
        }
        if !self.phi.is_empty() {
            out.push(("phi".into(), &self.phi));
        }
        out
    }

    /// Index of a named column in the export order, if present.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns().iter().position(|(n, _)| n == name)
    }
}
