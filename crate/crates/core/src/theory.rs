//! Closed-form predictions for random one- and two-cluster graphs.
//!
//! All quantities are per fixed source node `s`: `N_d` is the number of nodes
//! at distance `d` from `s`, and the `d = 2` path-count laws describe how
//! many shortest paths a node at distance 2 has back to `s`.

use serde::Serialize;
use statrs::distribution::{Binomial, ContinuousCDF, Discrete, Normal};

use crate::error::{Error, Result};

/// Bounds on `E[N_d]` for `G(n, c0/n)` from first-term path-existence sums.
///
/// Only meaningful while `c0^d` is small compared to `n`; beyond that the
/// first-term sums exceed one and the bounds overshoot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpiExpectationBounds {
    pub d: u32,
    /// `c0^d - c0^(d-1)`.
    pub base: f64,
    pub lower: f64,
    pub upper: f64,
}

impl SpiExpectationBounds {
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lower - slack && x <= self.upper + slack
    }
}

pub fn spi_expected_bounds(n: usize, c0: f64, d: u32) -> Result<SpiExpectationBounds> {
    if !(c0 > 2.0) {
        return Err(Error::InvalidParameter(format!("expectation bounds need c0 > 2, got {c0}")));
    }
    if d == 0 || n == 0 {
        return Err(Error::InvalidParameter("need d >= 1 and n >= 1".into()));
    }
    // n^d p1^d = c0^d when p1 = c0/n
    let base = c0.powi(d as i32) - c0.powi(d as i32 - 1);
    let k = (c0 - 1.0) * (c0 - 1.0);
    Ok(SpiExpectationBounds { d, base, lower: base * (1.0 - 1.0 / k), upper: base * (1.0 + c0 / k) })
}

/// Smallest mean degree for which the relative band holds.
pub fn theorem1_threshold() -> f64 {
    2.0 + 3f64.sqrt()
}

/// Half-width `2/(c0-1)` of the relative band `E[N_d^1] in E[N_d^2](1 ± ·)`.
pub fn theorem1_factor(c0: f64) -> Result<f64> {
    if c0.is_nan() || c0 < theorem1_threshold() {
        return Err(Error::InvalidParameter(format!("c0 = {c0} is below 2 + sqrt(3)")));
    }
    Ok(2.0 / (c0 - 1.0))
}

/// `scale · Bin(trials, success)`: predicted count of distance-2 nodes with
/// each number of shortest paths, one-cluster case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinomialLaw {
    pub trials: u64,
    pub success: f64,
    pub scale: f64,
}

impl BinomialLaw {
    pub fn pmf(&self, x: u64) -> f64 {
        if x > self.trials {
            return 0.0;
        }
        if self.success <= 0.0 {
            return if x == 0 { 1.0 } else { 0.0 };
        }
        // statrs evaluates the binomial pmf through log-factorials
        Binomial::new(self.success, self.trials).map(|b| b.pmf(x)).unwrap_or(0.0)
    }

    /// `scale · pmf(x)` for `x = 0..=x_max`.
    pub fn histogram(&self, x_max: u64) -> Vec<f64> {
        (0..=x_max).map(|x| self.scale * self.pmf(x)).collect()
    }

    pub fn mode(&self) -> u64 {
        (0..=self.trials)
            .max_by(|&a, &b| self.pmf(a).total_cmp(&self.pmf(b)))
            .unwrap_or(0)
    }

    pub fn mean(&self) -> f64 {
        self.trials as f64 * self.success
    }
}

/// One-cluster `d = 2` prediction: `N = round(n p1)` neighbours, each linked
/// to the target with probability `p1`, scaled by `E[N_2] ≈ (n p1)^2 - n p1`.
pub fn one_cluster_d2_prediction(n: usize, p1: f64) -> Result<BinomialLaw> {
    let np = n as f64 * p1;
    if !(np >= 1.0) || !(p1 < 1.0) {
        return Err(Error::InvalidParameter(format!("need n·p1 >= 1 and p1 < 1, got n·p1 = {np}")));
    }
    Ok(BinomialLaw { trials: np.round() as u64, success: p1, scale: np * np - np })
}

/// Two-component normal mixture for the two-cluster `d = 2` path counts.
/// The `plus` component covers targets in the source's own block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureModel {
    pub mean_plus: f64,
    pub mean_minus: f64,
    pub var_plus: f64,
    pub var_minus: f64,
    /// Expected sizes of V₂⁺ and V₂⁻.
    pub size_plus: f64,
    pub size_minus: f64,
    pub weight_plus: f64,
    pub weight_minus: f64,
}

/// Mass of `N(mean, var)` on `[x - 0.5, x + 0.5]`.
pub fn normal_bucket(mean: f64, var: f64, x: f64) -> f64 {
    if var <= 0.0 {
        return if (x - 0.5..x + 0.5).contains(&mean) { 1.0 } else { 0.0 };
    }
    let d = Normal::new(mean, var.sqrt()).expect("finite mean and positive sd");
    d.cdf(x + 0.5) - d.cdf(x - 0.5)
}

impl MixtureModel {
    pub fn total_size(&self) -> f64 {
        self.size_plus + self.size_minus
    }

    pub fn peak_gap(&self) -> f64 {
        self.mean_plus - self.mean_minus
    }

    /// Mixture density over the bucket at `x`, unscaled.
    pub fn density(&self, x: f64) -> f64 {
        self.weight_plus * normal_bucket(self.mean_plus, self.var_plus, x)
            + self.weight_minus * normal_bucket(self.mean_minus, self.var_minus, x)
    }

    /// Expected number of distance-2 nodes with `x` shortest paths, `x = 0..=x_max`.
    pub fn histogram(&self, x_max: u64) -> Vec<f64> {
        (0..=x_max).map(|x| self.total_size() * self.density(x as f64)).collect()
    }
}

pub fn two_cluster_d2_prediction(n: usize, p2: f64, q2: f64) -> Result<MixtureModel> {
    for (name, p) in [("p2", p2), ("q2", q2)] {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!("{name} = {p} is not in (0,1)")));
        }
    }
    if q2 > p2 {
        return Err(Error::InvalidParameter(format!("need q2 <= p2, got q2 = {q2}, p2 = {p2}")));
    }
    let half = n as f64 / 2.0;
    let nf = n as f64;
    let mean_plus = nf * (p2 * p2 + q2 * q2) / 2.0;
    let mean_minus = nf * p2 * q2;
    // Exact variances of the binomials being normal-approximated.
    let var_plus = half * p2 * p2 * (1.0 - p2) + half * q2 * q2 * (1.0 - q2);
    let var_minus = half * p2 * q2 * (1.0 - q2) + half * q2 * p2 * (1.0 - p2);
    // Exponential (Lemma-style) estimate of reaching a target within two
    // steps, minus the chance it is already a neighbour.
    let size_plus = (half * ((1.0 - (-mean_plus).exp()) - p2)).max(0.0);
    let size_minus = (half * ((1.0 - (-mean_minus).exp()) - q2)).max(0.0);
    let total = size_plus + size_minus;
    let (weight_plus, weight_minus) = if total > 0.0 { (size_plus / total, size_minus / total) } else { (0.5, 0.5) };
    Ok(MixtureModel { mean_plus, mean_minus, var_plus, var_minus, size_plus, size_minus, weight_plus, weight_minus })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakSeparation {
    /// `2 n alpha0^2 p1^2`.
    pub gap: f64,
    /// Lower bound `2 alpha0^2` on the gap relative to the lower peak.
    pub relative_bound: f64,
}

pub fn peak_separation(n: usize, p1: f64, alpha0: f64) -> Result<PeakSeparation> {
    if !(0.0..1.0).contains(&alpha0) {
        return Err(Error::InvalidParameter(format!("alpha0 = {alpha0} is not in [0,1)")));
    }
    Ok(PeakSeparation { gap: 2.0 * n as f64 * alpha0 * alpha0 * p1 * p1, relative_bound: 2.0 * alpha0 * alpha0 })
}

/// `1 - exp(-sum P[E_i])` with the error envelope for independent events
/// whose probabilities are at most `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InclusionExclusionEstimate {
    pub approx: f64,
    pub q_bound: f64,
    pub epsilon: f64,
    pub events: usize,
}

impl InclusionExclusionEstimate {
    pub fn contains(&self, p: f64) -> bool {
        (p - self.approx).abs() <= self.q_bound
    }
}

pub fn inclusion_exclusion_estimate(probs: &[f64]) -> Result<InclusionExclusionEstimate> {
    if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidParameter(format!("{p} is not a probability")));
    }
    let l = probs.len();
    let sum: f64 = probs.iter().sum();
    let eps = probs.iter().copied().fold(0.0, f64::max);
    let le = l as f64 * eps;
    // sum_{k=0}^{l+1} (l eps)^k / k!
    let mut term = 1.0;
    let mut series = 1.0;
    for k in 1..=(l + 1) {
        term *= le / k as f64;
        series += term;
    }
    let q_bound = (series - (1.0 + eps).powi(l as i32)).max(0.0);
    Ok(InclusionExclusionEstimate { approx: 1.0 - (-sum).exp(), q_bound, epsilon: eps, events: l })
}

/// Moving average over `x - radius ..= x + radius`, truncated at the ends.
pub fn smooth(values: &[f64], radius: usize) -> Vec<f64> {
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(radius);
            let hi = (i + radius).min(values.len() - 1);
            values[lo..=hi].iter().sum::<f64>() / (2 * radius + 1) as f64
        })
        .collect()
}

/// Positions of strict local maxima; a plateau counts once, at its first index.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    let mut runs: Vec<(usize, f64)> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        if runs.last().is_none_or(|&(_, last)| last != v) {
            runs.push((i, v));
        }
    }
    (0..runs.len())
        .filter(|&r| {
            let v = runs[r].1;
            let left = r == 0 || runs[r - 1].1 < v;
            let right = r + 1 == runs.len() || runs[r + 1].1 < v;
            left && right && v > 0.0
        })
        .map(|r| runs[r].0)
        .collect()
}
