//! Full-state baseline approximators: a product-inference fuzzy system with
//! Gaussian membership functions and an RBF network, each with its
//! Lyapunov-derived adaptation law.
//!
//! Both baselines evaluate their basis on the *true* state; they are the
//! full-state methods the output-feedback estimators are contrasted with.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numkit::LyapunovPair;

/// One Gaussian membership function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    pub center: f64,
    pub width: f64,
}

impl Gaussian {
    pub fn eval(&self, x: f64) -> f64 {
        (-((x - self.center) / self.width).powi(2)).exp()
    }
}

/// Per-dimension lists of Gaussian membership functions; the rule base is
/// the tensor product across dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipGrid {
    dims: Vec<Vec<Gaussian>>,
}

impl MembershipGrid {
    pub fn new(dims: Vec<Vec<Gaussian>>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|d| d.is_empty()) {
            return Err(Error::InvalidArgument(
                "membership grid needs at least one function per dimension".into(),
            ));
        }
        if dims.iter().flatten().any(|g| g.width <= 0.0) {
            return Err(Error::InvalidArgument("membership widths must be positive".into()));
        }
        Ok(Self { dims })
    }

    /// The five-set benchmark grid per dimension: Gaussians centered at
    /// -pi/6, -pi/12, 0, pi/12, pi/6, all with width pi/24.
    pub fn benchmark(n_dims: usize) -> Self {
        let centers = [-PI / 6.0, -PI / 12.0, 0.0, PI / 12.0, PI / 6.0];
        let row: Vec<Gaussian> =
            centers.iter().map(|&c| Gaussian { center: c, width: PI / 24.0 }).collect();
        Self { dims: vec![row; n_dims] }
    }

    pub fn n_dims(&self) -> usize {
        self.dims.len()
    }

    /// Total rule count: the product of per-dimension set counts.
    pub fn rule_count(&self) -> usize {
        self.dims.iter().map(|d| d.len()).product()
    }

    pub fn membership(&self, x_i: f64, dim: usize, index: usize) -> Result<f64> {
        let row = self
            .dims
            .get(dim)
            .ok_or_else(|| Error::InvalidArgument(format!("dimension {dim} out of range")))?;
        let g = row
            .get(index)
            .ok_or_else(|| Error::InvalidArgument(format!("membership index {index} out of range")))?;
        Ok(g.eval(x_i))
    }
}

/// Normalized rule firing strengths: tensor products of per-dimension
/// memberships over their total. The result always sums to one. Rules are
/// ordered with the last dimension's index varying fastest.
pub fn fuzzy_basis(x: &[f64], grid: &MembershipGrid) -> Result<Vec<f64>> {
    if x.len() != grid.n_dims() {
        return Err(Error::InvalidArgument(format!(
            "state dimension {} does not match grid dimension {}",
            x.len(),
            grid.n_dims()
        )));
    }
    let per_dim: Vec<Vec<f64>> = grid
        .dims
        .iter()
        .zip(x.iter())
        .map(|(row, &xi)| row.iter().map(|g| g.eval(xi)).collect())
        .collect();

    let total = grid.rule_count();
    let mut xi = Vec::with_capacity(total);
    let mut index = vec![0usize; grid.n_dims()];
    for _ in 0..total {
        let product: f64 = index.iter().enumerate().map(|(d, &i)| per_dim[d][i]).product();
        xi.push(product);
        for d in (0..grid.n_dims()).rev() {
            index[d] += 1;
            if index[d] < grid.dims[d].len() {
                break;
            }
            index[d] = 0;
        }
    }

    let denominator: f64 = xi.iter().sum();
    if denominator < 1e-300 {
        return Err(Error::DegenerateInput(format!(
            "fuzzy firing strengths underflowed at x = {x:?}"
        )));
    }
    for v in &mut xi {
        *v /= denominator;
    }
    Ok(xi)
}

/// Fuzzy output f_hat = theta^T xi.
pub fn fuzzy_output(theta: &[f64], xi: &[f64]) -> Result<f64> {
    dot(theta, xi)
}

/// Adaptation law for the fuzzy parameters: theta' = gamma (e^T P b) xi,
/// where b = (0, ..., 0, 1)^T so e^T P b is the last column of P dotted
/// with the tracking error.
///
/// Sign convention: with e = x - y_d and the stabilizing control
/// u = (1/g)[-f_hat + y_d^(n) - K^T e], the closed loop is
/// e' = L e + b (f - f_hat), and the Lyapunov derivative cancels only for
/// the positive sign here. (The classical minus form pairs with the
/// opposite, reference-minus-state, error convention.)
pub fn fuzzy_adapt_rhs(
    e: &[f64],
    pair: &LyapunovPair,
    xi: &[f64],
    gamma: f64,
) -> Result<Vec<f64>> {
    let coupling = pair.error_coupling(e)?;
    Ok(xi.iter().map(|v| gamma * coupling * v).collect())
}

/// Gaussian radial basis value exp(-||x - c||^2 / b^2).
pub fn rbf_gaussian(x: &[f64], center: &[f64], width: f64) -> f64 {
    let dist2: f64 = x.iter().zip(center.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
    (-dist2 / (width * width)).exp()
}

/// RBF network output f_hat = W^T h(x).
pub fn rbf_output(weights: &[f64], h: &[f64]) -> Result<f64> {
    dot(weights, h)
}

/// Adaptation law for the RBF weights: W' = gamma (e^T P b) h, with the same
/// sign convention as [`fuzzy_adapt_rhs`].
pub fn rbf_adapt_rhs(e: &[f64], pair: &LyapunovPair, h: &[f64], gamma: f64) -> Result<Vec<f64>> {
    let coupling = pair.error_coupling(e)?;
    Ok(h.iter().map(|v| gamma * coupling * v).collect())
}

/// RBF layout: hidden-node centers in the (e, e') plane with shared widths.
#[derive(Debug, Clone, PartialEq)]
pub struct RbfLayout {
    pub centers: Vec<Vec<f64>>,
    pub widths: Vec<f64>,
}

impl RbfLayout {
    /// Five nodes evenly spaced on the diagonal of [-0.2, 0.2]^2 with width
    /// 0.1, covering the tracking errors the benchmark scenarios produce.
    pub fn benchmark() -> Self {
        let centers = (0..5)
            .map(|k| {
                let c = -0.2 + 0.1 * k as f64;
                vec![c, c]
            })
            .collect();
        Self { centers, widths: vec![0.1; 5] }
    }

    pub fn validated(self) -> Result<Self> {
        if self.centers.is_empty() || self.centers.len() != self.widths.len() {
            return Err(Error::InvalidArgument(
                "RBF centers and widths must be nonempty and equal in count".into(),
            ));
        }
        if self.widths.iter().any(|w| *w <= 0.0) {
            return Err(Error::InvalidArgument("RBF widths must be positive".into()));
        }
        let dim = self.centers[0].len();
        if self.centers.iter().any(|c| c.len() != dim) {
            return Err(Error::InvalidArgument("RBF centers must share a dimension".into()));
        }
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.centers.len()
    }

    /// Basis vector h(x) over all hidden nodes.
    pub fn basis(&self, x: &[f64]) -> Vec<f64> {
        self.centers
            .iter()
            .zip(self.widths.iter())
            .map(|(c, &w)| rbf_gaussian(x, c, w))
            .collect()
    }
}

/// Lyapunov function value (1/2) e^T P e + (1/(2 gamma)) ||param_error||^2.
///
/// The optimal parameter is never computable in a real run, so callers pass
/// a frozen reference parameter and interpret the value relative to it.
pub fn lyapunov_value(e: &[f64], pair: &LyapunovPair, param_error: &[f64], gamma: f64) -> f64 {
    let p = pair.p();
    let mut quad = 0.0;
    for i in 0..e.len() {
        for j in 0..e.len() {
            quad += e[i] * p[(i, j)] * e[j];
        }
    }
    let param: f64 = param_error.iter().map(|v| v * v).sum();
    0.5 * quad + param / (2.0 * gamma)
}

fn dot(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "inner product length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x * y).sum())
}
