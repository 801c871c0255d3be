//! Stratified repeated cross-validation and per-dataset comparisons.
//!
//! Fold assignment depends only on the dataset, the seed and the run index,
//! so every method evaluated with the same seed sees the same splits and the
//! results can be compared pairwise.

mod compare;
mod stats;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::boosting::{fit, BoostConfig, BoostError, StopReason};
use crate::data::{DataError, Dataset};
use crate::metrics::{ContingencyTable, MeasureKind, MeasureValues};

pub use compare::{equivalence_compare, Tally, Verdict};
pub use stats::{summarize_stats, Summary};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Boost(#[from] BoostError),
    #[error("cannot make {k} folds from {n} instances")]
    BadFolds { k: usize, n: usize },
    #[error("need at least 1 run")]
    NoRuns,
    #[error("need at least 2 values, got {0}")]
    TooFewValues(usize),
    #[error("{methods} method values but {references} reference values")]
    Misaligned { methods: usize, references: usize },
    #[error("equivalence band must be finite and non-negative, got {0}")]
    BadBand(f64),
}

/// Splits instance indices into `k` stratified folds.
///
/// Each class is shuffled and dealt round-robin; the dealing position carries
/// over from one class to the next so overall fold sizes differ by at most 1.
pub fn stratified_kfold(data: &Dataset, k: usize, seed: u64) -> Result<Vec<Vec<usize>>, EvalError> {
    if k < 2 || k > data.len() {
        return Err(EvalError::BadFolds { k, n: data.len() });
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); data.num_classes()];
    for (i, inst) in data.instances().iter().enumerate() {
        by_class[inst.label].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for mut members in by_class {
        members.shuffle(&mut rng);
        for i in members {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldResult {
    pub run: usize,
    pub fold: usize,
    pub values: MeasureValues,
    pub rounds_run: usize,
    pub members: usize,
    pub stop_reason: StopReason,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvReport {
    pub config: BoostConfig,
    pub runs: usize,
    pub folds: usize,
    pub seed: u64,
    pub per_fold: Vec<FoldResult>,
}

impl CvReport {
    pub fn values(&self, measure: MeasureKind) -> Vec<f64> {
        self.per_fold.iter().map(|f| f.values.get(measure)).collect()
    }

    pub fn summary(&self, measure: MeasureKind) -> Summary {
        summarize_stats(&self.values(measure)).expect("a report has at least two folds")
    }

    pub fn mean(&self, measure: MeasureKind) -> f64 {
        self.summary(measure).mean
    }

    pub fn stop_reasons(&self) -> BTreeMap<StopReason, usize> {
        let mut out = BTreeMap::new();
        for f in &self.per_fold {
            *out.entry(f.stop_reason).or_default() += 1;
        }
        out
    }

    /// How many folds ran each number of rounds.
    pub fn rounds_run(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for f in &self.per_fold {
            *out.entry(f.rounds_run).or_default() += 1;
        }
        out
    }
}

/// The train/test index pairs of `runs` repetitions of stratified k-fold CV.
/// Run `r` uses seed `seed + r`.
pub fn cv_splits(data: &Dataset, runs: usize, k: usize, seed: u64) -> Result<Vec<(Vec<usize>, Vec<usize>)>, EvalError> {
    if runs == 0 {
        return Err(EvalError::NoRuns);
    }
    let mut splits = Vec::with_capacity(runs * k);
    for run in 0..runs {
        let folds = stratified_kfold(data, k, seed.wrapping_add(run as u64))?;
        for test in &folds {
            let mut in_test = vec![false; data.len()];
            test.iter().for_each(|&i| in_test[i] = true);
            let train = (0..data.len()).filter(|&i| !in_test[i]).collect();
            splits.push((train, test.clone()));
        }
    }
    Ok(splits)
}

/// Boosts on every training portion and scores all five measures on the
/// matching test portion with unit weights. Folds run in parallel; results
/// come back in (run, fold) order.
pub fn run_repeated_cv(data: &Dataset, config: &BoostConfig, runs: usize, k: usize, seed: u64) -> Result<CvReport, EvalError> {
    config.validate()?;
    let splits = cv_splits(data, runs, k, seed)?;
    let per_fold = splits
        .par_iter()
        .enumerate()
        .map(|(i, (train, test))| evaluate_split(data, config, train, test, i / k, i % k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CvReport { config: *config, runs, folds: k, seed, per_fold })
}

/// Trains on `train`, scores on `test`.
pub fn evaluate_split(
    data: &Dataset,
    config: &BoostConfig,
    train: &[usize],
    test: &[usize],
    run: usize,
    fold: usize,
) -> Result<FoldResult, EvalError> {
    let train_data = data.subset(train)?.with_unit_weights();
    let test_data = data.subset(test)?;
    let ensemble = fit(&train_data, config)?;
    let predicted = ensemble.predict_all(&test_data);
    let table = ContingencyTable::from_indices(data.classes(), &test_data.labels(), &predicted, &vec![1.0; test.len()])
        .expect("test folds are non-empty and labels are in range");
    Ok(FoldResult {
        run,
        fold,
        values: MeasureValues::of(&table),
        rounds_run: ensemble.rounds_run,
        members: ensemble.members.len(),
        stop_reason: ensemble.stop_reason,
    })
}
