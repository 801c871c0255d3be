use serde::Serialize;

use super::BoostError;
use crate::data::{Dataset, Instance, Value};
use crate::learners::{argmax, WeakModel};
use crate::metrics::MeasureKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Completed,
    PerfectRound,
    SurrenderedAtChance,
    DegenerateFirstRound,
}

impl StopReason {
    pub const ALL: [StopReason; 4] = [
        StopReason::Completed,
        StopReason::PerfectRound,
        StopReason::SurrenderedAtChance,
        StopReason::DegenerateFirstRound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StopReason::Completed => "completed",
            StopReason::PerfectRound => "perfect_round",
            StopReason::SurrenderedAtChance => "surrendered_at_chance",
            StopReason::DegenerateFirstRound => "degenerate_first_round",
        }
    }
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Member {
    pub model: WeakModel,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoostedEnsemble {
    pub members: Vec<Member>,
    /// Weak learners trained, including any whose round was rejected.
    pub rounds_run: usize,
    pub stop_reason: StopReason,
    pub measure: MeasureKind,
    pub num_classes: usize,
    /// The rejected first-round model of a degenerate run. Members stay
    /// empty, but this is what a lone weak learner would have predicted.
    pub fallback: Option<WeakModel>,
    /// Training majority class, the last resort for a degenerate run.
    pub majority: usize,
}

impl BoostedEnsemble {
    pub fn is_degenerate(&self) -> bool {
        self.members.is_empty()
    }

    /// Weighted plurality vote; ties go to the lowest class index.
    pub fn predict(&self, values: &[Value]) -> Result<usize, BoostError> {
        if self.members.is_empty() {
            return Err(BoostError::Degenerate);
        }
        let mut votes = vec![0.0; self.num_classes];
        for m in &self.members {
            votes[m.model.predict_values(values)] += m.alpha;
        }
        Ok(argmax(&votes))
    }

    /// Like [`BoostedEnsemble::predict`], but a degenerate ensemble answers
    /// with its fallback model, or failing that the training majority.
    pub fn predict_or_fallback(&self, values: &[Value]) -> usize {
        match self.predict(values) {
            Ok(c) => c,
            Err(_) => self.fallback.as_ref().map_or(self.majority, |m| m.predict_values(values)),
        }
    }

    pub fn predict_all(&self, data: &Dataset) -> Vec<usize> {
        data.instances().iter().map(|i| self.predict_or_fallback(&i.values)).collect()
    }
}

/// Class chosen by the ensemble's vote for one instance.
pub fn ensemble_predict(ensemble: &BoostedEnsemble, instance: &Instance) -> Result<usize, BoostError> {
    ensemble.predict(&instance.values)
}
