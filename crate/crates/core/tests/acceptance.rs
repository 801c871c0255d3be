//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any gating criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use adabook::boosting::{boost_round, fit, BoostConfig, StopReason};
use adabook::data::Dataset;
use adabook::evaluation::{run_repeated_cv, CvReport};
use adabook::learners::{LearnerSpec, TreeParams};
use adabook::metrics::{cohen_kappa, informedness, markedness, matthews_correlation, ContingencyTable, MeasureKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::invariants;
use common::*;

const SEED: u64 = 1;
const TOL: f64 = 0.08;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn cv(data: &Dataset, measure: MeasureKind, rounds: usize, learner: LearnerSpec, subcommittees: Option<usize>) -> CvReport {
    let mut config = BoostConfig::new(measure, rounds, learner).with_seed(SEED);
    if let Some(s) = subcommittees {
        config = config.multiboost(s);
    }
    run_repeated_cv(data, &config, 2, 5, SEED).expect("cross-validation")
}

fn inf(report: &CvReport) -> f64 {
    report.mean(MeasureKind::Informedness)
}

fn tree() -> LearnerSpec {
    LearnerSpec::Tree(TreeParams::rep_tree())
}

fn near(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

fn metric_oracles() -> Outcome {
    let labels = ["a", "b"];
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for a in 0..=4 {
        for b in 0..=4 {
            for c in 0..=4 {
                for d in 0..=4 {
                    let cells = vec![vec![a as f64, b as f64], vec![c as f64, d as f64]];
                    let Ok(t) = ContingencyTable::from_cells(&labels, &cells) else { continue };
                    checked += 1;
                    worst = worst
                        .max((informedness(&t) - oracle_informedness(&cells)).abs())
                        .max((cohen_kappa(&t) - oracle_kappa(&cells)).abs())
                        .max((markedness(&t) - oracle_markedness(&cells)).abs());
                    if let Some(m) = oracle_matthews_2x2(&cells) {
                        worst = worst.max((matthews_correlation(&t) - m).abs());
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let labels3 = ["a", "b", "c"];
    for _ in 0..10_000 {
        let cells: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..3).map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..50.0) }).collect())
            .collect();
        let Ok(t) = ContingencyTable::from_cells(&labels3, &cells) else { continue };
        checked += 1;
        worst = worst
            .max((informedness(&t) - oracle_informedness(&cells)).abs())
            .max((cohen_kappa(&t) - oracle_kappa(&cells)).abs())
            .max((markedness(&t) - oracle_markedness(&cells)).abs());
    }
    outcome(worst <= 1e-9, format!("{checked} tables, max deviation {worst:.2e}"))
}

fn classical_round() -> Outcome {
    let d = six_instances();
    let config = BoostConfig::new(MeasureKind::RandAccuracy, 1, LearnerSpec::Stump);
    let out = boost_round(&d, &[1.0 / 6.0; 6], &config, 0).unwrap();
    let beta = out.beta.unwrap_or(f64::NAN);
    let wrong: f64 = d
        .instances()
        .iter()
        .zip(&out.weights)
        .filter(|(i, _)| out.model.predict(i) != i.label)
        .map(|(_, w)| w)
        .sum();
    let pass = near(beta, 0.2, 1e-9) && near(wrong, 0.5, 1e-9) && near(out.weights[4], 0.5, 1e-9);
    outcome(pass, format!("beta {beta:.12}, misclassified weight {wrong:.12}"))
}

fn early_surrender() -> Outcome {
    let d = constant_fixture(10, 6);
    let run = |m| fit(&d, &BoostConfig::new(m, 10, LearnerSpec::Stump)).unwrap();
    let acc = run(MeasureKind::RandAccuracy);
    let book = run(MeasureKind::Informedness);
    let kap = run(MeasureKind::CohenKappa);
    let pass = acc.rounds_run >= 1
        && !acc.members.is_empty()
        && book.stop_reason == StopReason::DegenerateFirstRound
        && kap.stop_reason == StopReason::DegenerateFirstRound;
    outcome(
        pass,
        format!(
            "accuracy: {} rounds, {} members ({}); informedness: {}; kappa: {}",
            acc.rounds_run,
            acc.members.len(),
            acc.stop_reason,
            book.stop_reason,
            kap.stop_reason
        ),
    )
}

fn multiboost_reduction() -> Outcome {
    let iris = load("iris.arff");
    let vowel = load("vowel.arff");
    let mut cases = 0;
    for (data, learner) in [(&iris, tree()), (&vowel, LearnerSpec::Stump), (&iris, LearnerSpec::NaiveBayes)] {
        for measure in [MeasureKind::RandAccuracy, MeasureKind::Informedness, MeasureKind::CohenKappa] {
            let config = BoostConfig::new(measure, 12, learner).with_seed(SEED);
            if let Err(e) = invariants::multiboost_reduction(data, &config) {
                return outcome(false, e);
            }
            cases += 1;
        }
    }
    outcome(true, format!("{cases} configurations identical member for member"))
}

fn invariant_sweep() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let measures = MeasureKind::ALL;
    let mut cases = 0;
    for case in 0..200 {
        let n = rng.gen_range(4..40);
        let classes = rng.gen_range(2..4);
        let attrs = rng.gen_range(1..4);
        let data = invariants::random_dataset(&mut rng, n, attrs, classes, true, true);
        let weights = invariants::random_weights(&mut rng, n);
        let measure = measures[case % measures.len()];
        let factor = [0.25, 2.0, 3.0, 1e3][case % 4];
        let attrs = rng.gen_range(1..4);
        let numeric = invariants::random_dataset(&mut rng, n.min(10), attrs, classes, false, false);
        let numeric_w = invariants::random_weights(&mut rng, numeric.len());
        let k = rng.gen_range(2..=n.min(5));
        let results = [
            invariants::weight_conservation(&data, measure, LearnerSpec::Stump, 8),
            invariants::weight_conservation(&data, measure, LearnerSpec::NaiveBayes, 4),
            invariants::scale_invariance(&data, &weights, factor),
            invariants::stump_optimality(&numeric, &numeric_w),
            invariants::fold_partition(&data, k, case as u64),
            invariants::determinism(&data, &BoostConfig::new(measure, 5, tree()).multiboost(2).with_seed(case as u64)),
        ];
        for r in results {
            if let Err(e) = r {
                return outcome(false, format!("case {case}: {e}"));
            }
        }
        cases += 1;
    }
    outcome(true, format!("{cases} random cases x 6 invariants"))
}

fn iris_reproduction() -> Outcome {
    let d = load("iris.arff");
    let ds = inf(&cv(&d, MeasureKind::Informedness, 1, LearnerSpec::Stump, None));
    let rt = inf(&cv(&d, MeasureKind::Informedness, 1, tree(), None));
    let boosted = inf(&cv(&d, MeasureKind::Informedness, 26, tree(), None));
    let pass = near(ds, 0.67, TOL) && near(rt, 0.92, TOL) && near(boosted, 0.93, TOL);
    outcome(pass, format!("stump {ds:.3} (0.67), tree {rt:.3} (0.92), AdaBook tree T=26 {boosted:.3} (0.93)"))
}

fn vowel_reproduction() -> Outcome {
    let d = load("vowel.arff");
    let ds = inf(&cv(&d, MeasureKind::Informedness, 1, LearnerSpec::Stump, None));
    let rt = inf(&cv(&d, MeasureKind::Informedness, 1, tree(), None));
    let ada = inf(&cv(&d, MeasureKind::Informedness, 26, tree(), None));
    let multi = inf(&cv(&d, MeasureKind::Informedness, 26, tree(), Some(3)));
    let pass = near(ds, 0.47, TOL)
        && near(rt, 0.59, TOL)
        && near(ada, 0.90, TOL)
        && near(multi, 0.89, TOL)
        && ada - rt >= 0.15
        && multi - rt >= 0.15;
    outcome(
        pass,
        format!(
            "stump {ds:.3} (0.47), tree {rt:.3} (0.59), AdaBook {ada:.3} (0.90), MultiBook {multi:.3} (0.89), gain {:.3}",
            ada.min(multi) - rt
        ),
    )
}

fn letter_headline() -> Outcome {
    let d = load("letter.arff");
    let ds = inf(&cv(&d, MeasureKind::Informedness, 1, LearnerSpec::Stump, None));
    let acc = cv(&d, MeasureKind::RandAccuracy, 260, LearnerSpec::Stump, None);
    let book = inf(&cv(&d, MeasureKind::Informedness, 260, LearnerSpec::Stump, None));
    let acc_inf = inf(&acc);
    let pass = near(acc_inf, ds, 0.05) && book - ds >= 0.05;
    outcome(
        pass,
        format!(
            "stump {ds:.3} (0.40), AdaBoost-accuracy T=260 {acc_inf:.3} (0.40, {:?}), AdaBook T=260 {book:.3} (0.49)",
            acc.stop_reasons()
        ),
    )
}

fn naive_bayes_rarely_boosts() -> Outcome {
    let mut improved = Vec::new();
    let mut detail = Vec::new();
    for name in ["iris", "vowel"] {
        let d = load(&format!("{name}.arff"));
        let plain = inf(&cv(&d, MeasureKind::Informedness, 1, LearnerSpec::NaiveBayes, None));
        let boosted = inf(&cv(&d, MeasureKind::Informedness, 26, LearnerSpec::NaiveBayes, None));
        if boosted - plain >= 0.05 {
            improved.push(name);
        }
        detail.push(format!("{name}: nb {plain:.3} -> AdaBook nb T=26 {boosted:.3}"));
    }
    outcome(improved.len() <= 1, detail.join("; "))
}

fn diminishing_returns() -> Outcome {
    let d = load("vowel.arff");
    let t260 = inf(&cv(&d, MeasureKind::Informedness, 260, LearnerSpec::Stump, None));
    let t2600 = inf(&cv(&d, MeasureKind::Informedness, 2600, LearnerSpec::Stump, None));
    outcome(t2600 - t260 < 0.05, format!("AdaBook stump T=260 {t260:.3}, T=2600 {t2600:.3}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, bool); 10] = [
        ("1 metric oracle equivalence", metric_oracles, true),
        ("2 classical AdaBoost round", classical_round, true),
        ("3 early-surrender divergence", early_surrender, true),
        ("4 MultiBoost reduction", multiboost_reduction, true),
        ("5 invariant suites", invariant_sweep, true),
        ("6 iris reproduction", iris_reproduction, true),
        ("7 vowel reproduction", vowel_reproduction, true),
        ("8 letter chance-correction gap", letter_headline, true),
        // reported, not gating
        ("9 naive Bayes rarely boosts", naive_bayes_rarely_boosts, false),
        ("10 diminishing returns", diminishing_returns, true),
    ];
    let mut failed = 0;
    for (name, check, gating) in criteria {
        let start = Instant::now();
        let o = check();
        let status = match (o.pass, gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (reported only)",
        };
        println!("[{status}] {name}: {} [{:.1}s]", o.detail, start.elapsed().as_secs_f64());
        if !o.pass && gating {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        println!("all acceptance criteria passed");
        ExitCode::SUCCESS
    }
}
