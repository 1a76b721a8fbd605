//! Primal linear SVM trained with Pegasos (stochastic hinge-loss subgradient
//! steps with learning rate `1/(lambda t)` and projection onto the
//! `1/sqrt(lambda)` ball), plus stratified k-fold evaluation.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{FeatureIndex, SparseRow};
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PegasosConfig {
    pub lambda: f64,
    /// Number of SGD steps; `None` means 100 per training sample.
    pub iterations: Option<usize>,
    pub project: bool,
}

impl Default for PegasosConfig {
    fn default() -> Self {
        PegasosConfig { lambda: 1e-4, iterations: None, project: true }
    }
}

impl PegasosConfig {
    pub fn steps_for(&self, samples: usize) -> usize {
        self.iterations.unwrap_or(100 * samples)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub lambda: f64,
    pub iterations: usize,
    pub feature_index: FeatureIndex,
    pub weights: Vec<f64>,
}

impl LinearModel {
    pub fn decision(&self, x: &SparseRow) -> f64 {
        x.iter().map(|&(i, v)| self.weights.get(i).copied().unwrap_or(0.0) * v).sum()
    }

    /// `+1` or `-1`; a zero decision value maps to `+1`.
    pub fn predict(&self, x: &SparseRow) -> f64 {
        if self.decision(x) >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn accuracy(&self, rows: &[SparseRow], labels: &[f64]) -> f64 {
        let correct = rows.iter().zip(labels).filter(|(x, &y)| self.predict(x) == y).count();
        correct as f64 / rows.len() as f64
    }

    pub fn weight_norm(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

fn check_training_set(rows: &[SparseRow], labels: &[f64], dim: usize) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter("no training samples".into()));
    }
    if rows.len() != labels.len() {
        return Err(Error::DimensionMismatch { expected: rows.len(), got: labels.len() });
    }
    if labels.iter().any(|&y| y != 1.0 && y != -1.0) {
        return Err(Error::InvalidParameter("labels must be +1 or -1".into()));
    }
    if !(labels.contains(&1.0) && labels.contains(&-1.0)) {
        return Err(Error::SingleClass);
    }
    for row in rows {
        if let Some(&(i, _)) = row.iter().find(|&&(i, _)| i >= dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: i + 1 });
        }
    }
    Ok(())
}

/// Trains with examples drawn uniformly at random from a seeded stream.
pub fn pegasos_train(
    rows: &[SparseRow],
    labels: &[f64],
    dim: usize,
    config: &PegasosConfig,
    seed: u64,
) -> Result<LinearModel> {
    let mut rng = rng_from_seed(seed);
    let n = rows.len();
    pegasos_train_with_order(rows, labels, dim, config, || rng.gen_range(0..n.max(1)))
}

/// Trains with example indices supplied by `next_index`, one per step.
pub fn pegasos_train_with_order(
    rows: &[SparseRow],
    labels: &[f64],
    dim: usize,
    config: &PegasosConfig,
    mut next_index: impl FnMut() -> usize,
) -> Result<LinearModel> {
    check_training_set(rows, labels, dim)?;
    if !(config.lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {}", config.lambda)));
    }
    let steps = config.steps_for(rows.len());
    let radius = 1.0 / config.lambda.sqrt();
    let mut w = vec![0.0; dim];
    for t in 1..=steps {
        let i = next_index();
        let (x, y) = (&rows[i], labels[i]);
        let eta = 1.0 / (config.lambda * t as f64);
        let margin = y * x.iter().map(|&(j, v)| w[j] * v).sum::<f64>();
        let shrink = 1.0 - eta * config.lambda;
        w.iter_mut().for_each(|wj| *wj *= shrink);
        if margin < 1.0 {
            for &(j, v) in x {
                w[j] += eta * y * v;
            }
        }
        if config.project {
            let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > radius {
                let s = radius / norm;
                w.iter_mut().for_each(|wj| *wj *= s);
            }
        }
    }
    Ok(LinearModel { lambda: config.lambda, iterations: steps, feature_index: FeatureIndex::default(), weights: w })
}

/// Assignment of samples to `k` test folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub assignments: Vec<usize>,
}

impl FoldPlan {
    /// Shuffles each class separately and deals samples round-robin, so both
    /// overall and per-class fold sizes differ by at most one.
    pub fn stratified(labels: &[f64], k: usize, seed: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 folds, got {k}")));
        }
        if labels.len() < k {
            return Err(Error::InvalidParameter(format!("{} samples cannot fill {k} folds", labels.len())));
        }
        let mut rng = rng_from_seed(seed);
        let mut assignments = vec![0; labels.len()];
        let mut next = 0;
        for class in [1.0, -1.0] {
            let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
            idx.shuffle(&mut rng);
            for i in idx {
                assignments[i] = next % k;
                next += 1;
            }
        }
        Ok(FoldPlan { k, assignments })
    }

    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len()).filter(|&i| self.assignments[i] == fold).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub tested: usize,
    pub correct: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub per_fold: Vec<FoldResult>,
    pub folds: usize,
    pub config: PegasosConfig,
    pub seed: u64,
}

fn run_fold(
    rows: &[SparseRow],
    labels: &[f64],
    dim: usize,
    plan: &FoldPlan,
    fold: usize,
    config: &PegasosConfig,
    seed: u64,
) -> Result<FoldResult> {
    let (mut train_x, mut train_y, mut test) = (Vec::new(), Vec::new(), Vec::new());
    for (i, &f) in plan.assignments.iter().enumerate() {
        if f == fold {
            test.push(i);
        } else {
            train_x.push(rows[i].clone());
            train_y.push(labels[i]);
        }
    }
    let model = pegasos_train(&train_x, &train_y, dim, config, derive_seed(&[seed, fold as u64]))?;
    let correct = test.iter().filter(|&&i| model.predict(&rows[i]) == labels[i]).count();
    Ok(FoldResult { fold, tested: test.len(), correct, accuracy: correct as f64 / test.len() as f64 })
}

/// Stratified k-fold cross-validation; every sample is tested exactly once.
pub fn kfold_eval(
    rows: &[SparseRow],
    labels: &[f64],
    dim: usize,
    k: usize,
    config: &PegasosConfig,
    seed: u64,
) -> Result<EvalReport> {
    check_training_set(rows, labels, dim)?;
    let plan = FoldPlan::stratified(labels, k, derive_seed(&[seed, 0xf01d]))?;
    #[cfg(feature = "parallel")]
    let per_fold = {
        use rayon::prelude::*;
        (0..k)
            .into_par_iter()
            .map(|f| run_fold(rows, labels, dim, &plan, f, config, seed))
            .collect::<Result<Vec<_>>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let per_fold = (0..k)
        .map(|f| run_fold(rows, labels, dim, &plan, f, config, seed))
        .collect::<Result<Vec<_>>>()?;
    let correct: usize = per_fold.iter().map(|f| f.correct).sum();
    Ok(EvalReport { accuracy: correct as f64 / rows.len() as f64, per_fold, folds: k, config: *config, seed })
}
