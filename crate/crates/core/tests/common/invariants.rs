//! Invariant checks run both by the property tests and by the acceptance
//! sweep. Each returns `Err` with a description of the first violation.
#![allow(dead_code)]

use adabook::boosting::{boost_round, fit, BoostConfig, CHANCE_TOLERANCE, PERFECT_TOLERANCE};
use adabook::data::{Attribute, Dataset, Instance, Value};
use adabook::evaluation::{run_repeated_cv, stratified_kfold};
use adabook::learners::{train_stump, LearnerSpec, TreeParams};
use adabook::metrics::MeasureKind;
use rand::Rng;

pub fn random_dataset<R: Rng>(rng: &mut R, n: usize, attrs: usize, classes: usize, nominal: bool, missing: bool) -> Dataset {
    let attributes: Vec<Attribute> = (0..attrs)
        .map(|a| {
            if nominal && a % 2 == 1 {
                Attribute::nominal(format!("n{a}"), ["p", "q", "r"])
            } else {
                Attribute::numeric(format!("x{a}"))
            }
        })
        .collect();
    let instances = (0..n)
        .map(|i| {
            let values = attributes
                .iter()
                .map(|attr| {
                    if missing && rng.gen_bool(0.1) {
                        Value::Missing
                    } else if attr.is_numeric() {
                        Value::Numeric(rng.gen_range(0..6) as f64)
                    } else {
                        Value::Nominal(rng.gen_range(0..3))
                    }
                })
                .collect();
            // every class appears at least once
            let label = if i < classes { i } else { rng.gen_range(0..classes) };
            Instance::new(values, label)
        })
        .collect();
    let names = (0..classes).map(|c| format!("c{c}")).collect();
    Dataset::new("random", attributes, "class", names, instances).unwrap()
}

pub fn random_weights<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(0.05..3.0) }).collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    w
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// After each non-terminal round weights are positive and sum to 1; under
/// Rand accuracy the misclassified weight is exactly one half.
pub fn weight_conservation(data: &Dataset, measure: MeasureKind, learner: LearnerSpec, rounds: usize) -> Result<(), String> {
    let config = BoostConfig::new(measure, rounds, learner);
    let n = data.len();
    let mut w = vec![1.0 / n as f64; n];
    for round in 0..rounds {
        let out = boost_round(data, &w, &config, round as u64).map_err(|e| e.to_string())?;
        if out.error < PERFECT_TOLERANCE || out.error >= 0.5 - CHANCE_TOLERANCE {
            ensure(out.weights == w, || format!("round {round}: terminal round changed weights"))?;
            return Ok(());
        }
        let sum: f64 = out.weights.iter().sum();
        ensure((sum - 1.0).abs() <= 1e-9, || format!("round {round}: weights sum to {sum}"))?;
        ensure(out.weights.iter().all(|&x| x > 0.0), || format!("round {round}: non-positive weight"))?;
        let floored = out.weights.iter().any(|&x| x <= config.weight_floor * 1.0001);
        if measure == MeasureKind::RandAccuracy && !floored {
            let wrong: f64 = data
                .instances()
                .iter()
                .zip(&out.weights)
                .filter(|(inst, _)| out.model.predict(inst) != inst.label)
                .map(|(_, w)| w)
                .sum();
            ensure((wrong - 0.5).abs() <= 1e-9, || format!("round {round}: misclassified weight {wrong}"))?;
        }
        w = out.weights;
    }
    Ok(())
}

/// Multiplying every weight by a constant leaves each learner's model unchanged.
pub fn scale_invariance(data: &Dataset, weights: &[f64], factor: f64) -> Result<(), String> {
    let scaled: Vec<f64> = weights.iter().map(|w| w * factor).collect();
    let params = TreeParams { prune_fraction: 0.0, ..TreeParams::rep_tree() };
    for spec in [LearnerSpec::Stump, LearnerSpec::Tree(params), LearnerSpec::Tree(TreeParams::cart()), LearnerSpec::NaiveBayes] {
        let a = spec.train(data, weights, 5).map_err(|e| e.to_string())?;
        let b = spec.train(data, &scaled, 5).map_err(|e| e.to_string())?;
        let pa = a.predict_all(data);
        let pb = b.predict_all(data);
        ensure(pa == pb, || format!("{} predictions change under scaling by {factor}", spec.name()))?;
    }
    Ok(())
}

/// Weighted error of the best single split found by brute force, over
/// numeric attributes without missing values.
pub fn brute_force_stump_error(data: &Dataset, weights: &[f64]) -> f64 {
    let k = data.num_classes();
    let total: f64 = weights.iter().sum();
    let mut class_w = vec![0.0; k];
    for (inst, w) in data.instances().iter().zip(weights) {
        class_w[inst.label] += w;
    }
    let leaf = total - class_w.iter().cloned().fold(0.0, f64::max);
    let mut best = leaf;
    for a in 0..data.num_attributes() {
        let mut values: Vec<f64> = data
            .instances()
            .iter()
            .zip(weights)
            .filter(|(_, &w)| w > 0.0)
            .filter_map(|(inst, _)| match inst.values[a] {
                Value::Numeric(x) => Some(x),
                _ => None,
            })
            .collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for pair in values.windows(2) {
            let t = (pair[0] + pair[1]) / 2.0;
            let mut left = vec![0.0; k];
            let mut right = vec![0.0; k];
            for (inst, &w) in data.instances().iter().zip(weights) {
                if let Value::Numeric(x) = inst.values[a] {
                    if x < t {
                        left[inst.label] += w;
                    } else {
                        right[inst.label] += w;
                    }
                }
            }
            let err = total - left.iter().cloned().fold(0.0, f64::max) - right.iter().cloned().fold(0.0, f64::max);
            best = best.min(err);
        }
    }
    best / total
}

pub fn stump_optimality(data: &Dataset, weights: &[f64]) -> Result<(), String> {
    let model = train_stump(data, weights).map_err(|e| e.to_string())?;
    let got = model.training_error(data, weights);
    let want = brute_force_stump_error(data, weights);
    ensure((got - want).abs() <= 1e-9, || format!("stump error {got}, enumeration {want}"))
}

pub fn fold_partition(data: &Dataset, k: usize, seed: u64) -> Result<(), String> {
    let folds = stratified_kfold(data, k, seed).map_err(|e| e.to_string())?;
    ensure(folds.len() == k, || format!("{} folds", folds.len()))?;
    let mut seen = vec![0; data.len()];
    folds.iter().flatten().for_each(|&i| seen[i] += 1);
    ensure(seen.iter().all(|&c| c == 1), || "folds do not partition the instances".into())?;
    for c in 0..data.num_classes() {
        let counts: Vec<usize> =
            folds.iter().map(|f| f.iter().filter(|&&i| data.instances()[i].label == c).count()).collect();
        let (lo, hi) = (counts.iter().min().unwrap(), counts.iter().max().unwrap());
        ensure(hi - lo <= 1, || format!("class {c} fold counts {counts:?}"))?;
    }
    ensure(folds == stratified_kfold(data, k, seed).unwrap(), || "folds not deterministic".into())
}

pub fn determinism(data: &Dataset, config: &BoostConfig) -> Result<(), String> {
    let a = fit(data, config).map_err(|e| e.to_string())?;
    let b = fit(data, config).map_err(|e| e.to_string())?;
    ensure(a == b, || "ensembles differ between identical runs".into())?;
    let ra = run_repeated_cv(data, config, 2, 2, config.seed).map_err(|e| e.to_string())?;
    let rb = run_repeated_cv(data, config, 2, 2, config.seed).map_err(|e| e.to_string())?;
    ensure(ra == rb, || "cross-validation reports differ between identical runs".into())
}

/// With a single subcommittee MultiBoost is AdaBoost.
pub fn multiboost_reduction(data: &Dataset, config: &BoostConfig) -> Result<(), String> {
    let ada = fit(data, config).map_err(|e| e.to_string())?;
    let multi = fit(data, &config.multiboost(1)).map_err(|e| e.to_string())?;
    ensure(ada == multi, || "one-subcommittee MultiBoost differs from AdaBoost".into())
}
