//! Result records and their JSON / CSV renderings.
//!
//! Floats are written in shortest round-trip form in both formats, so the
//! two renderings of a record parse back to identical numbers.

use std::collections::BTreeMap;

use adabook::boosting::StopReason;
use adabook::data::Dataset;
use adabook::evaluation::{run_repeated_cv, CvReport};
use adabook::metrics::{MeasureKind, MeasureValues};
use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

use crate::{BoosterArg, CellConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct FoldRow {
    pub run: usize,
    pub fold: usize,
    pub accuracy: f64,
    pub kappa: f64,
    pub informedness: f64,
    pub markedness: f64,
    pub matthews: f64,
    pub rounds_run: usize,
    pub members: usize,
    pub stop_reason: StopReason,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundsRun {
    pub min: usize,
    pub mean: f64,
    pub max: usize,
    /// Folds per distinct round count.
    pub counts: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub cell_id: String,
    pub dataset: String,
    pub learner: String,
    pub booster: String,
    pub measure: MeasureKind,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcommittees: Option<usize>,
    pub runs: usize,
    pub folds: usize,
    pub seed: u64,
    pub per_fold: Vec<FoldRow>,
    pub means: MeasureValues,
    pub sds: MeasureValues,
    pub two_se: MeasureValues,
    pub stop_reasons: BTreeMap<&'static str, usize>,
    pub rounds_run: RoundsRun,
}

fn per_measure(report: &CvReport, f: impl Fn(adabook::evaluation::Summary) -> f64) -> MeasureValues {
    let v = |m| f(report.summary(m));
    MeasureValues {
        accuracy: v(MeasureKind::RandAccuracy),
        kappa: v(MeasureKind::CohenKappa),
        informedness: v(MeasureKind::Informedness),
        markedness: v(MeasureKind::Markedness),
        matthews: v(MeasureKind::MatthewsCorrelation),
    }
}

impl Record {
    pub fn evaluate(cell_id: &str, dataset: &str, data: &Dataset, cell: &CellConfig) -> Result<Self> {
        let report = run_repeated_cv(data, &cell.boost_config(), cell.runs, cell.folds, cell.seed)?;
        Ok(Self::from_report(cell_id, dataset, cell, &report))
    }

    pub fn from_report(cell_id: &str, dataset: &str, cell: &CellConfig, report: &CvReport) -> Self {
        let per_fold: Vec<FoldRow> = report
            .per_fold
            .iter()
            .map(|f| FoldRow {
                run: f.run,
                fold: f.fold,
                accuracy: f.values.accuracy,
                kappa: f.values.kappa,
                informedness: f.values.informedness,
                markedness: f.values.markedness,
                matthews: f.values.matthews,
                rounds_run: f.rounds_run,
                members: f.members,
                stop_reason: f.stop_reason,
            })
            .collect();
        let counts = report.stop_reasons();
        let stop_reasons = StopReason::ALL.iter().map(|r| (r.name(), counts.get(r).copied().unwrap_or(0))).collect();
        let rounds: Vec<usize> = per_fold.iter().map(|f| f.rounds_run).collect();
        Record {
            cell_id: cell_id.to_string(),
            dataset: dataset.to_string(),
            learner: cell.learner.name().to_string(),
            booster: cell.booster.name().to_string(),
            measure: cell.measure,
            iterations: cell.iterations,
            subcommittees: (cell.booster == BoosterArg::Multiboost).then_some(cell.subcommittees),
            runs: cell.runs,
            folds: cell.folds,
            seed: cell.seed,
            means: per_measure(report, |s| s.mean),
            sds: per_measure(report, |s| s.sd),
            two_se: per_measure(report, |s| s.two_se),
            stop_reasons,
            rounds_run: RoundsRun {
                min: rounds.iter().copied().min().unwrap_or(0),
                mean: rounds.iter().sum::<usize>() as f64 / rounds.len().max(1) as f64,
                max: rounds.iter().copied().max().unwrap_or(0),
                counts: report.rounds_run(),
            },
            per_fold,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn csv_header() -> Vec<String> {
        let mut h: Vec<String> = ["cell_id", "dataset", "learner", "booster", "measure", "iterations", "subcommittees", "runs", "folds", "seed"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        for stat in ["mean", "sd", "two_se"] {
            for m in MeasureKind::ALL {
                h.push(format!("{stat}_{}", m.name()));
            }
        }
        for r in StopReason::ALL {
            h.push(format!("stop_{}", r.name()));
        }
        h.extend(["rounds_min", "rounds_mean", "rounds_max"].map(String::from));
        h
    }

    pub fn csv_fields(&self) -> Vec<String> {
        let mut f = vec![
            self.cell_id.clone(),
            self.dataset.clone(),
            self.learner.clone(),
            self.booster.clone(),
            self.measure.name().to_string(),
            self.iterations.to_string(),
            self.subcommittees.map(|s| s.to_string()).unwrap_or_default(),
            self.runs.to_string(),
            self.folds.to_string(),
            self.seed.to_string(),
        ];
        for values in [&self.means, &self.sds, &self.two_se] {
            for m in MeasureKind::ALL {
                f.push(values.get(m).to_string());
            }
        }
        for r in StopReason::ALL {
            f.push(self.stop_reasons[r.name()].to_string());
        }
        f.push(self.rounds_run.min.to_string());
        f.push(self.rounds_run.mean.to_string());
        f.push(self.rounds_run.max.to_string());
        f
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(Self::csv_header())?;
        w.write_record(self.csv_fields())?;
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    /// One row per fold per measure: cell_id, run, fold, measure, value.
    pub fn tidy_rows(&self) -> Vec<[String; 5]> {
        let mut rows = Vec::new();
        for f in &self.per_fold {
            let values =
                [f.accuracy, f.kappa, f.informedness, f.markedness, f.matthews];
            for (m, v) in MeasureKind::ALL.iter().zip(values) {
                rows.push([self.cell_id.clone(), f.run.to_string(), f.fold.to_string(), m.name().to_string(), v.to_string()]);
            }
        }
        rows
    }
}
