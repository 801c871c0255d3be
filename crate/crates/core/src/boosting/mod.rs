//! AdaBoost.M1 and MultiBoost with a pluggable error measure.
//!
//! Each round the weak learner is scored on its weighted training
//! contingency table. Under Rand accuracy the error is the usual weighted
//! misclassification rate; under a chance-corrected measure it is
//! `(1 - kappa) / 2`, so a learner that merely guesses the majority class
//! scores exactly one half and boosting stops.

mod ensemble;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::data::Dataset;
use crate::learners::{LearnerError, LearnerSpec, WeakModel};
use crate::metrics::{generalized_error, informedness, rand_accuracy, ContingencyTable, MeasureKind};

pub use ensemble::{ensemble_predict, BoostedEnsemble, Member, StopReason};

/// Errors at or above `0.5 - CHANCE_TOLERANCE` count as chance.
pub const CHANCE_TOLERANCE: f64 = 1e-12;
/// Errors below this count as a perfect round.
pub const PERFECT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoostError {
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error("invalid boosting configuration: {0}")]
    Config(String),
    #[error("the ensemble has no members")]
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoostMode {
    AdaBoost,
    /// Rounds are split into this many contiguous subcommittees, each after
    /// the first starting from fresh wagging weights.
    MultiBoost { subcommittees: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoostConfig {
    pub measure: MeasureKind,
    pub rounds: usize,
    pub learner: LearnerSpec,
    pub mode: BoostMode,
    pub seed: u64,
    pub weight_floor: f64,
}

impl BoostConfig {
    /// AdaBoost with seed 0 and a weight floor of 1e-12.
    pub fn new(measure: MeasureKind, rounds: usize, learner: LearnerSpec) -> Self {
        Self { measure, rounds, learner, mode: BoostMode::AdaBoost, seed: 0, weight_floor: 1e-12 }
    }

    pub fn multiboost(self, subcommittees: usize) -> Self {
        Self { mode: BoostMode::MultiBoost { subcommittees }, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<(), BoostError> {
        if self.rounds == 0 {
            return Err(BoostError::Config("rounds must be at least 1".into()));
        }
        if let BoostMode::MultiBoost { subcommittees } = self.mode {
            if subcommittees == 0 || subcommittees > self.rounds {
                return Err(BoostError::Config(format!(
                    "subcommittees must be between 1 and rounds ({}), got {subcommittees}",
                    self.rounds
                )));
            }
        }
        if !(self.weight_floor > 0.0 && self.weight_floor < 1.0) {
            return Err(BoostError::Config(format!("weight_floor {} not in (0, 1)", self.weight_floor)));
        }
        Ok(())
    }

    fn segments(&self) -> usize {
        match self.mode {
            BoostMode::AdaBoost => 1,
            BoostMode::MultiBoost { subcommittees } => subcommittees,
        }
    }
}

/// Outcome of training and scoring one weak learner.
#[derive(Debug, Clone)]
pub struct RoundOutcome {
    pub model: WeakModel,
    /// Raw value of the boosting measure on the weighted training table.
    pub kappa: f64,
    pub error: f64,
    /// `error / (1 - error)`, present only when the weights were updated.
    pub beta: Option<f64>,
    pub weights: Vec<f64>,
    pub table: ContingencyTable,
}

/// One line of a boosting trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    pub kappa: f64,
    pub error: f64,
    pub beta: Option<f64>,
    /// Vote weight, absent when the round was rejected.
    pub alpha: Option<f64>,
    pub train_acc: f64,
    pub train_inf: f64,
    pub w_max: f64,
    pub w_min: f64,
}

/// Trains the base learner on `weights`, scores it and reweights.
///
/// Correctly classified instances are multiplied by `beta` when
/// `0 < error < 1/2`; weights are then floored and renormalised to sum 1.
/// Otherwise the returned weights equal the input.
pub fn boost_round(data: &Dataset, weights: &[f64], config: &BoostConfig, seed: u64) -> Result<RoundOutcome, BoostError> {
    let model = config.learner.train(data, weights, seed)?;
    let gold = data.labels();
    let predicted = model.predict_all(data);
    let table = ContingencyTable::from_indices(data.classes(), &gold, &predicted, weights)
        .map_err(|e| BoostError::Config(e.to_string()))?;
    let kappa = config.measure.evaluate(&table);
    let error = generalized_error(config.measure, &table);

    let mut new_weights = weights.to_vec();
    let mut beta = None;
    if error >= PERFECT_TOLERANCE && error < 0.5 - CHANCE_TOLERANCE {
        let b = error / (1.0 - error);
        for ((w, g), p) in new_weights.iter_mut().zip(&gold).zip(&predicted) {
            if g == p {
                *w *= b;
            }
            *w = w.max(config.weight_floor);
        }
        let total: f64 = new_weights.iter().sum();
        new_weights.iter_mut().for_each(|w| *w /= total);
        beta = Some(b);
    }
    Ok(RoundOutcome { model, kappa, error, beta, weights: new_weights, table })
}

/// Unit-exponential random weights normalised to sum 1.
pub fn wagging_weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    // 1 - [0, 1) is (0, 1], so the log is finite
    let mut w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        w.iter_mut().for_each(|x| *x /= total);
    } else {
        w.iter_mut().for_each(|x| *x = 1.0 / n as f64);
    }
    w
}

/// Classical AdaBoost.M1 with `config.measure` supplying the error.
pub fn adaboost_m1(data: &Dataset, config: &BoostConfig) -> Result<BoostedEnsemble, BoostError> {
    if config.mode != BoostMode::AdaBoost {
        return Err(BoostError::Config("adaboost_m1 needs mode adaboost".into()));
    }
    fit(data, config)
}

/// MultiBoost: AdaBoost restarted from wagging weights at every subcommittee.
pub fn multiboost(data: &Dataset, config: &BoostConfig) -> Result<BoostedEnsemble, BoostError> {
    if !matches!(config.mode, BoostMode::MultiBoost { .. }) {
        return Err(BoostError::Config("multiboost needs mode multiboost".into()));
    }
    fit(data, config)
}

/// Boosts according to `config.mode`.
pub fn fit(data: &Dataset, config: &BoostConfig) -> Result<BoostedEnsemble, BoostError> {
    fit_inner(data, config, None)
}

/// Boosts and records one [`RoundRecord`] per weak learner trained.
pub fn fit_traced(data: &Dataset, config: &BoostConfig) -> Result<(BoostedEnsemble, Vec<RoundRecord>), BoostError> {
    let mut trace = Vec::new();
    let ensemble = fit_inner(data, config, Some(&mut trace))?;
    Ok((ensemble, trace))
}

/// Round lengths of each subcommittee; the remainder goes to the leading ones.
pub fn segment_lengths(rounds: usize, segments: usize) -> Vec<usize> {
    (0..segments).map(|s| rounds / segments + usize::from(s < rounds % segments)).collect()
}

fn learner_seed(seed: u64, round: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(round as u64)
}

fn fit_inner(data: &Dataset, config: &BoostConfig, mut trace: Option<&mut Vec<RoundRecord>>) -> Result<BoostedEnsemble, BoostError> {
    config.validate()?;
    if data.is_empty() {
        return Err(BoostError::Config("cannot boost an empty dataset".into()));
    }
    let n = data.len();
    let initial = {
        let w = data.instance_weights();
        let total: f64 = w.iter().sum();
        if !(total > 0.0) {
            return Err(LearnerError::InvalidWeights.into());
        }
        w.into_iter().map(|x| x / total).collect::<Vec<_>>()
    };
    let mut wag_rng = ChaCha8Rng::seed_from_u64(config.seed);
    wag_rng.set_stream(1);

    let mut members = Vec::new();
    let mut fallback = None;
    let mut rounds_run = 0;
    let mut last_reason = StopReason::Completed;
    let mut round = 0;

    for (s, len) in segment_lengths(config.rounds, config.segments()).into_iter().enumerate() {
        let mut weights = if s == 0 { initial.clone() } else { wagging_weights(n, &mut wag_rng) };
        last_reason = StopReason::Completed;
        for _ in 0..len {
            round += 1;
            let out = boost_round(data, &weights, config, learner_seed(config.seed, round))?;
            rounds_run += 1;
            let alpha = if out.error < PERFECT_TOLERANCE {
                let eps = 1.0 / (2.0 * n as f64);
                Some(((1.0 - eps) / eps).ln())
            } else if out.error < 0.5 - CHANCE_TOLERANCE {
                Some(((1.0 - out.error) / out.error).ln())
            } else {
                None
            };
            if let Some(t) = trace.as_deref_mut() {
                t.push(RoundRecord {
                    round,
                    kappa: out.kappa,
                    error: out.error,
                    beta: out.beta,
                    alpha,
                    train_acc: rand_accuracy(&out.table),
                    train_inf: informedness(&out.table),
                    w_max: weights.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    w_min: weights.iter().copied().fold(f64::INFINITY, f64::min),
                });
            }
            let Some(alpha) = alpha else {
                log::debug!("round {round}: error {:.6} at or above chance, surrendering", out.error);
                if fallback.is_none() && members.is_empty() {
                    fallback = Some(out.model);
                }
                last_reason = StopReason::SurrenderedAtChance;
                break;
            };
            members.push(Member { model: out.model, alpha });
            if out.error < PERFECT_TOLERANCE {
                last_reason = StopReason::PerfectRound;
                break;
            }
            weights = out.weights;
        }
    }

    let stop_reason = if members.is_empty() { StopReason::DegenerateFirstRound } else { last_reason };
    if !members.is_empty() {
        fallback = None;
    }
    Ok(BoostedEnsemble {
        members,
        rounds_run,
        stop_reason,
        measure: config.measure,
        num_classes: data.num_classes(),
        fallback,
        majority: data.majority_class(),
    })
}
