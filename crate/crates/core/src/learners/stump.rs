use serde::Serialize;

use super::split::{SplitContext, SplitCriterion, SplitRule};
use super::{argmax, checked_weights, LearnerError, WeakModel};
use crate::data::{Dataset, Value};

/// A one-split decision tree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Stump {
    /// No split was possible; predicts the weighted majority.
    Leaf { class: usize },
    Split {
        attribute: usize,
        rule: SplitRule,
        /// Predicted class per branch of `rule`.
        branches: Vec<usize>,
    },
}

impl Stump {
    pub fn predict(&self, values: &[Value]) -> usize {
        match self {
            Stump::Leaf { class } => *class,
            Stump::Split { attribute, rule, branches } => branches[rule.branch(values[*attribute])],
        }
    }
}

/// Trains the single-attribute split with the lowest weighted
/// misclassification; each branch predicts its weighted-majority class.
/// A split that does not beat the majority leaf is dropped.
pub fn train_stump(data: &Dataset, weights: &[f64]) -> Result<WeakModel, LearnerError> {
    let weights = checked_weights(data, weights)?;
    let ctx = SplitContext::new(data, &weights);
    let root = ctx.root(|_| true);
    let class_weights = ctx.class_weights(&root.rows);
    let majority = argmax(&class_weights);
    let total: f64 = class_weights.iter().sum();
    let leaf_error = total - class_weights[majority];
    let useful = |score: f64| score < leaf_error - 1e-10 * total;
    let stump = match ctx.best_split(&root, SplitCriterion::Error, 0.0) {
        Some(split) if useful(split.score) => Stump::Split {
            attribute: split.attribute,
            rule: split.rule,
            branches: split
                .branch_weights
                .iter()
                .map(|b| if b.iter().sum::<f64>() > 0.0 { argmax(b) } else { majority })
                .collect(),
        },
        _ => Stump::Leaf { class: majority },
    };
    Ok(WeakModel::Stump(stump))
}
