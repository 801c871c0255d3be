use serde::Serialize;

use super::{argmax_scores, checked_weights, LearnerError, WeakModel};
use crate::data::{AttributeKind, Dataset, Value};

const VARIANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AttributeModel {
    /// `log_probs[class][value]`, add-one smoothed.
    Nominal { log_probs: Vec<Vec<f64>> },
    Gaussian { mean: Vec<f64>, variance: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NaiveBayes {
    pub log_priors: Vec<f64>,
    pub attributes: Vec<AttributeModel>,
}

impl NaiveBayes {
    /// Unnormalised log posterior per class. Missing values are skipped.
    pub fn log_posteriors(&self, values: &[Value]) -> Vec<f64> {
        let mut scores = self.log_priors.clone();
        for (model, value) in self.attributes.iter().zip(values) {
            match (model, *value) {
                (AttributeModel::Nominal { log_probs }, Value::Nominal(v)) => {
                    for (s, probs) in scores.iter_mut().zip(log_probs) {
                        if let Some(lp) = probs.get(v) {
                            *s += lp;
                        }
                    }
                }
                (AttributeModel::Gaussian { mean, variance }, Value::Numeric(x)) => {
                    for ((s, m), var) in scores.iter_mut().zip(mean).zip(variance) {
                        *s += -0.5 * (2.0 * std::f64::consts::PI * var).ln() - (x - m) * (x - m) / (2.0 * var);
                    }
                }
                _ => {}
            }
        }
        scores
    }

    pub fn predict(&self, values: &[Value]) -> usize {
        argmax_scores(&self.log_posteriors(values))
    }
}

/// Weighted naive Bayes: add-one smoothed priors and nominal conditionals,
/// Gaussian likelihoods for numeric attributes.
pub fn train_naive_bayes(data: &Dataset, weights: &[f64]) -> Result<WeakModel, LearnerError> {
    let weights = checked_weights(data, weights)?;
    let k = data.num_classes();
    let class_w = data.class_weights(&weights);
    let total: f64 = class_w.iter().sum();
    let log_priors = class_w.iter().map(|w| ((w + 1.0) / (total + k as f64)).ln()).collect();

    let attributes = data
        .attributes()
        .iter()
        .enumerate()
        .map(|(a, attr)| match &attr.kind {
            AttributeKind::Nominal(values) => {
                let arity = values.len();
                let mut counts = vec![vec![0.0; arity]; k];
                for (inst, w) in data.instances().iter().zip(&weights) {
                    if let Value::Nominal(v) = inst.values[a] {
                        counts[inst.label][v] += w;
                    }
                }
                let log_probs = counts
                    .into_iter()
                    .map(|row| {
                        let denom: f64 = row.iter().sum::<f64>() + arity as f64;
                        row.into_iter().map(|c| ((c + 1.0) / denom).ln()).collect()
                    })
                    .collect();
                AttributeModel::Nominal { log_probs }
            }
            AttributeKind::Numeric => gaussian(data, &weights, a, k),
        })
        .collect();
    Ok(WeakModel::NaiveBayes(NaiveBayes { log_priors, attributes }))
}

fn gaussian(data: &Dataset, weights: &[f64], a: usize, k: usize) -> AttributeModel {
    let mut sw = vec![0.0; k];
    let mut swx = vec![0.0; k];
    for (inst, &w) in data.instances().iter().zip(weights) {
        if let Value::Numeric(x) = inst.values[a] {
            sw[inst.label] += w;
            swx[inst.label] += w * x;
        }
    }
    let all_w: f64 = sw.iter().sum();
    let all_mean = if all_w > 0.0 { swx.iter().sum::<f64>() / all_w } else { 0.0 };
    let mean: Vec<f64> = (0..k).map(|c| if sw[c] > 0.0 { swx[c] / sw[c] } else { all_mean }).collect();
    let mut ss = vec![0.0; k];
    let mut all_ss = 0.0;
    for (inst, &w) in data.instances().iter().zip(weights) {
        if let Value::Numeric(x) = inst.values[a] {
            ss[inst.label] += w * (x - mean[inst.label]).powi(2);
            all_ss += w * (x - all_mean).powi(2);
        }
    }
    let all_var = if all_w > 0.0 { all_ss / all_w } else { 1.0 };
    // classes with no known values borrow the pooled estimate
    let variance = (0..k)
        .map(|c| if sw[c] > 0.0 { ss[c] / sw[c] } else { all_var }.max(VARIANCE_FLOOR))
        .collect();
    AttributeModel::Gaussian { mean, variance }
}
