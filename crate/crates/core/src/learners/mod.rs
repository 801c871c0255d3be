//! Weight-aware weak learners: decision stump, greedy decision tree and
//! naive Bayes.
//!
//! Every learner takes one non-negative weight per instance. Weights are
//! rescaled internally to sum to the number of positively weighted
//! instances, so multiplying them by a constant does not change the model,
//! and zero-weight instances are ignored entirely. Ties between classes,
//! attributes and thresholds always resolve to the lowest index.

mod naive_bayes;
mod split;
mod stump;
mod tree;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{Dataset, Instance, Value};

pub use naive_bayes::{train_naive_bayes, AttributeModel, NaiveBayes};
pub use split::{SplitCriterion, SplitRule};
pub use stump::{train_stump, Stump};
pub use tree::{train_tree, Tree, TreeNode, TreeParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LearnerError {
    #[error("got {got} weights for {expected} instances")]
    WeightLength { expected: usize, got: usize },
    #[error("weights must be finite and non-negative with a positive sum")]
    InvalidWeights,
    #[error("invalid learner parameters: {0}")]
    InvalidParams(String),
}

/// A trained weak model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum WeakModel {
    Stump(Stump),
    Tree(Tree),
    NaiveBayes(NaiveBayes),
}

impl WeakModel {
    pub fn predict(&self, instance: &Instance) -> usize {
        self.predict_values(&instance.values)
    }

    pub fn predict_values(&self, values: &[Value]) -> usize {
        match self {
            WeakModel::Stump(s) => s.predict(values),
            WeakModel::Tree(t) => t.predict(values),
            WeakModel::NaiveBayes(nb) => nb.predict(values),
        }
    }

    pub fn predict_all(&self, data: &Dataset) -> Vec<usize> {
        data.instances().iter().map(|i| self.predict(i)).collect()
    }

    /// Weighted fraction of misclassified instances.
    pub fn training_error(&self, data: &Dataset, weights: &[f64]) -> f64 {
        let total: f64 = weights.iter().sum();
        let wrong: f64 = data
            .instances()
            .iter()
            .zip(weights)
            .filter(|(inst, _)| self.predict(inst) != inst.label)
            .map(|(_, w)| w)
            .sum();
        wrong / total
    }
}

/// Which base learner a booster trains each round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerKind {
    Stump,
    /// Information-gain tree with reduced-error pruning.
    Tree,
    /// Gini tree with reduced-error pruning.
    Cart,
    NaiveBayes,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LearnerSpec {
    Stump,
    Tree(TreeParams),
    NaiveBayes,
}

impl LearnerSpec {
    pub fn train(&self, data: &Dataset, weights: &[f64], seed: u64) -> Result<WeakModel, LearnerError> {
        match self {
            LearnerSpec::Stump => train_stump(data, weights),
            LearnerSpec::Tree(params) => train_tree(data, weights, params, seed),
            LearnerSpec::NaiveBayes => train_naive_bayes(data, weights),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LearnerSpec::Stump => "stump",
            LearnerSpec::Tree(p) if p.criterion == SplitCriterion::Gini => "cart",
            LearnerSpec::Tree(_) => "tree",
            LearnerSpec::NaiveBayes => "nb",
        }
    }
}

impl From<LearnerKind> for LearnerSpec {
    fn from(kind: LearnerKind) -> Self {
        match kind {
            LearnerKind::Stump => LearnerSpec::Stump,
            LearnerKind::Tree => LearnerSpec::Tree(TreeParams::rep_tree()),
            LearnerKind::Cart => LearnerSpec::Tree(TreeParams::cart()),
            LearnerKind::NaiveBayes => LearnerSpec::NaiveBayes,
        }
    }
}

/// Index of the largest weight; values within rounding of the current best
/// count as ties and keep the lower index.
pub fn argmax(weights: &[f64]) -> usize {
    let scale: f64 = weights.iter().map(|w| w.abs()).sum();
    let eps = 1e-12 * scale;
    let mut best = 0;
    for (i, &w) in weights.iter().enumerate().skip(1) {
        if w > weights[best] + eps {
            best = i;
        }
    }
    best
}

fn argmax_scores(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        let eps = 1e-12 * scores[best].abs().max(1.0);
        if s > scores[best] + eps {
            best = i;
        }
    }
    best
}

/// Validates weights and rescales them to sum to the positive-weight count.
fn checked_weights(data: &Dataset, weights: &[f64]) -> Result<Vec<f64>, LearnerError> {
    if weights.len() != data.len() {
        return Err(LearnerError::WeightLength { expected: data.len(), got: weights.len() });
    }
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(LearnerError::InvalidWeights);
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(LearnerError::InvalidWeights);
    }
    let positive = weights.iter().filter(|&&w| w > 0.0).count() as f64;
    let scale = positive / total;
    Ok(weights.iter().map(|w| w * scale).collect())
}
