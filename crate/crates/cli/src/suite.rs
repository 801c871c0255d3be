//! Suites: every declared dataset crossed with every declared method.
//!
//! ```toml
//! seed = 1
//! runs = 2
//! folds = 5
//! out_dir = "results"   # relative to the suite file
//! jobs = 4
//! baseline = "ds"       # method ids to compare every other method against
//! treeline = "rt"
//! band = 0.05
//!
//! [[dataset]]
//! name = "iris"
//! path = "../data/iris.arff"
//!
//! [[method]]
//! id = "ds"
//! learner = "stump"
//! booster = "none"
//!
//! [[method]]
//! id = "inf_d26"
//! learner = "stump"
//! booster = "adaboost"
//! measure = "informedness"
//! iterations = 26
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use adabook::evaluation::{equivalence_compare, Tally, Verdict};
use adabook::metrics::MeasureKind;
use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::record::Record;
use crate::{load_dataset, BoosterArg, CellConfig, LearnerArg};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_folds")]
    pub folds: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub baseline: Option<String>,
    #[serde(default)]
    pub treeline: Option<String>,
    #[serde(default = "default_band")]
    pub band: f64,
    #[serde(default, rename = "dataset")]
    pub datasets: Vec<DatasetEntry>,
    #[serde(default, rename = "method")]
    pub methods: Vec<MethodEntry>,
}

fn default_seed() -> u64 {
    1
}
fn default_runs() -> usize {
    2
}
fn default_folds() -> usize {
    5
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("results")
}
fn default_band() -> f64 {
    0.05
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub name: String,
    pub path: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodEntry {
    pub id: String,
    pub learner: String,
    pub booster: String,
    #[serde(default = "default_measure")]
    pub measure: String,
    pub iterations: Option<usize>,
    #[serde(default = "default_subcommittees")]
    pub subcommittees: usize,
}

fn default_measure() -> String {
    "informedness".into()
}
fn default_subcommittees() -> usize {
    3
}

impl MethodEntry {
    fn cell(&self, spec: &SuiteSpec) -> Result<CellConfig> {
        let learner = LearnerArg::from_str(&self.learner, true)
            .map_err(|_| anyhow::anyhow!("method {}: unknown learner `{}`", self.id, self.learner))?;
        let booster = BoosterArg::from_str(&self.booster, true)
            .map_err(|_| anyhow::anyhow!("method {}: unknown booster `{}`", self.id, self.booster))?;
        let measure: MeasureKind = self.measure.parse().with_context(|| format!("method {}", self.id))?;
        let mut cell = CellConfig::new(learner, booster, measure, self.iterations, self.subcommittees)
            .with_context(|| format!("method {}", self.id))?;
        cell.runs = spec.runs;
        cell.folds = spec.folds;
        cell.seed = spec.seed;
        Ok(cell)
    }
}

impl SuiteSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let spec: SuiteSpec = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() || self.methods.is_empty() {
            bail!("a suite needs at least one [[dataset]] and one [[method]]");
        }
        let mut seen = HashSet::new();
        for d in &self.datasets {
            if !seen.insert(format!("dataset {}", d.name)) {
                bail!("duplicate dataset name `{}`", d.name);
            }
        }
        for m in &self.methods {
            if !seen.insert(format!("method {}", m.id)) {
                bail!("duplicate method id `{}`", m.id);
            }
            if m.id.contains('/') {
                bail!("method id `{}` may not contain `/`", m.id);
            }
            m.cell(self)?;
        }
        for reference in [&self.baseline, &self.treeline].into_iter().flatten() {
            if !self.methods.iter().any(|m| &m.id == reference) {
                bail!("reference method `{reference}` is not declared");
            }
        }
        if !(self.band >= 0.0) {
            bail!("band must be non-negative");
        }
        Ok(())
    }
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum CellOutcome {
    Ok(Box<Record>),
    Failed { cell_id: String, dataset: String, method: String, error: String },
}

struct Cell<'a> {
    id: String,
    dataset: &'a DatasetEntry,
    method: &'a MethodEntry,
}

/// Runs a suite; returns whether every cell produced a record.
pub fn cmd_suite(spec_path: &Path, out_dir: Option<&Path>, jobs: Option<usize>) -> Result<bool> {
    let text = std::fs::read_to_string(spec_path).with_context(|| format!("reading {}", spec_path.display()))?;
    let spec = SuiteSpec::parse(&text).with_context(|| format!("invalid suite {}", spec_path.display()))?;
    let base = spec_path.parent().unwrap_or(Path::new("."));
    let out_dir = out_dir.map(Path::to_path_buf).unwrap_or_else(|| base.join(&spec.out_dir));
    std::fs::create_dir_all(out_dir.join("cells")).with_context(|| format!("creating {}", out_dir.display()))?;

    let cells: Vec<Cell> = spec
        .datasets
        .iter()
        .flat_map(|d| spec.methods.iter().map(move |m| Cell { id: format!("{}/{}", d.name, m.id), dataset: d, method: m }))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.or(spec.jobs).unwrap_or(0)).build()?;
    let outcomes: Vec<CellOutcome> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let result = (|| {
                    let config = cell.method.cell(&spec)?;
                    let data = load_dataset(&base.join(&cell.dataset.path))?;
                    Record::evaluate(&cell.id, &cell.dataset.name, &data, &config)
                })();
                match result {
                    Ok(record) => {
                        log::info!("{} done", cell.id);
                        CellOutcome::Ok(Box::new(record))
                    }
                    Err(e) => {
                        log::error!("{}: {e:#}", cell.id);
                        CellOutcome::Failed {
                            cell_id: cell.id.clone(),
                            dataset: cell.dataset.name.clone(),
                            method: cell.method.id.clone(),
                            error: format!("{e:#}"),
                        }
                    }
                }
            })
            .collect()
    });

    for (cell, outcome) in cells.iter().zip(&outcomes) {
        let file = out_dir.join("cells").join(format!("{}__{}.json", cell.dataset.name, cell.method.id));
        std::fs::write(&file, serde_json::to_string_pretty(outcome)? + "\n")?;
    }
    std::fs::write(out_dir.join("results.json"), serde_json::to_string_pretty(&outcomes)? + "\n")?;
    write_results_csv(&out_dir.join("results.csv"), &outcomes)?;
    write_tidy_csv(&out_dir.join("tidy.csv"), &cells, &outcomes)?;

    let table = MeanTable::new(&spec, &outcomes);
    let comparisons = table.comparisons(&spec)?;
    write_comparisons(&out_dir.join("comparison.csv"), &comparisons)?;
    let summary = render_summary(&spec, &table, &comparisons, &outcomes);
    std::fs::write(out_dir.join("summary.txt"), &summary)?;
    print!("{summary}");

    let failed = outcomes.iter().filter(|o| matches!(o, CellOutcome::Failed { .. })).count();
    if failed > 0 {
        eprintln!("{failed} of {} cells failed", outcomes.len());
    }
    Ok(failed == 0)
}

fn write_results_csv(path: &Path, outcomes: &[CellOutcome]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = Record::csv_header();
    header.push("error".into());
    w.write_record(&header)?;
    for o in outcomes {
        match o {
            CellOutcome::Ok(r) => {
                let mut f = r.csv_fields();
                f.push(String::new());
                w.write_record(&f)?;
            }
            CellOutcome::Failed { cell_id, dataset, error, .. } => {
                let mut f = vec![String::new(); header.len()];
                f[0] = cell_id.clone();
                f[1] = dataset.clone();
                *f.last_mut().unwrap() = error.clone();
                w.write_record(&f)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn write_tidy_csv(path: &Path, cells: &[Cell], outcomes: &[CellOutcome]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["cell_id", "dataset", "method", "run", "fold", "measure", "value"])?;
    for (cell, o) in cells.iter().zip(outcomes) {
        if let CellOutcome::Ok(r) = o {
            for [id, run, fold, measure, value] in r.tidy_rows() {
                w.write_record([id, cell.dataset.name.clone(), cell.method.id.clone(), run, fold, measure, value])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Mean informedness per dataset (rows) and method (columns).
struct MeanTable {
    datasets: Vec<String>,
    methods: Vec<String>,
    means: Vec<Vec<Option<f64>>>,
}

#[derive(Debug, Serialize)]
struct Comparison {
    method: String,
    reference: String,
    dataset: String,
    method_mean: f64,
    reference_mean: f64,
    verdict: Verdict,
}

impl MeanTable {
    fn new(spec: &SuiteSpec, outcomes: &[CellOutcome]) -> Self {
        let datasets: Vec<String> = spec.datasets.iter().map(|d| d.name.clone()).collect();
        let methods: Vec<String> = spec.methods.iter().map(|m| m.id.clone()).collect();
        let means = (0..datasets.len())
            .map(|d| {
                (0..methods.len())
                    .map(|m| match &outcomes[d * methods.len() + m] {
                        CellOutcome::Ok(r) => Some(r.means.informedness),
                        CellOutcome::Failed { .. } => None,
                    })
                    .collect()
            })
            .collect();
        Self { datasets, methods, means }
    }

    fn column(&self, method: &str) -> usize {
        self.methods.iter().position(|m| m == method).expect("validated method id")
    }

    fn comparisons(&self, spec: &SuiteSpec) -> Result<Vec<Comparison>> {
        let mut out = Vec::new();
        for reference in [&spec.baseline, &spec.treeline].into_iter().flatten() {
            let r = self.column(reference);
            for (m, method) in self.methods.iter().enumerate().filter(|(m, _)| *m != r) {
                let pairs: Vec<(usize, f64, f64)> = (0..self.datasets.len())
                    .filter_map(|d| Some((d, self.means[d][m]?, self.means[d][r]?)))
                    .collect();
                let mv: Vec<f64> = pairs.iter().map(|p| p.1).collect();
                let rv: Vec<f64> = pairs.iter().map(|p| p.2).collect();
                let verdicts = equivalence_compare(&mv, &rv, spec.band)?;
                for ((d, mm, rm), verdict) in pairs.into_iter().zip(verdicts) {
                    out.push(Comparison {
                        method: method.clone(),
                        reference: reference.clone(),
                        dataset: self.datasets[d].clone(),
                        method_mean: mm,
                        reference_mean: rm,
                        verdict,
                    });
                }
            }
        }
        Ok(out)
    }
}

fn write_comparisons(path: &Path, comparisons: &[Comparison]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["method", "reference", "dataset", "method_mean", "reference_mean", "verdict"])?;
    for c in comparisons {
        w.write_record([
            c.method.clone(),
            c.reference.clone(),
            c.dataset.clone(),
            c.method_mean.to_string(),
            c.reference_mean.to_string(),
            c.verdict.name().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn render_summary(spec: &SuiteSpec, table: &MeanTable, comparisons: &[Comparison], outcomes: &[CellOutcome]) -> String {
    let name_w = table.datasets.iter().map(String::len).chain(["SigLosses".len()]).max().unwrap_or(8) + 2;
    let col_w = table.methods.iter().map(String::len).max().unwrap_or(4).max(6) + 2;
    let mut s = String::new();
    let _ = writeln!(s, "Mean informedness, {}x{}-fold CV, seed {}", spec.runs, spec.folds, spec.seed);
    let _ = write!(s, "{:<name_w$}", "dataset");
    for m in &table.methods {
        let _ = write!(s, "{m:>col_w$}");
    }
    s.push('\n');
    for (d, name) in table.datasets.iter().enumerate() {
        let _ = write!(s, "{name:<name_w$}");
        for v in &table.means[d] {
            let cell = v.map_or("failed".to_string(), |v| format!("{v:.2}"));
            let _ = write!(s, "{cell:>col_w$}");
        }
        s.push('\n');
    }
    let _ = write!(s, "{:<name_w$}", "Average");
    for m in 0..table.methods.len() {
        let vals: Vec<f64> = table.means.iter().filter_map(|row| row[m]).collect();
        let avg = if vals.is_empty() { "-".to_string() } else { format!("{:.2}", vals.iter().sum::<f64>() / vals.len() as f64) };
        let _ = write!(s, "{avg:>col_w$}");
    }
    s.push('\n');

    for reference in [&spec.baseline, &spec.treeline].into_iter().flatten() {
        let _ = writeln!(s, "\nagainst {reference} (band {}):", spec.band);
        let tallies: Vec<Option<Tally>> = table
            .methods
            .iter()
            .map(|m| {
                (m != reference).then(|| {
                    let v: Vec<Verdict> = comparisons
                        .iter()
                        .filter(|c| &c.reference == reference && &c.method == m)
                        .map(|c| c.verdict)
                        .collect();
                    Tally::of(&v)
                })
            })
            .collect();
        for (label, get) in [
            ("EquiWins", (|t: &Tally| t.equi_wins) as fn(&Tally) -> usize),
            ("SigBoosts", |t: &Tally| t.sig_boosts),
            ("SigLosses", |t: &Tally| t.sig_losses),
            ("Neutral", |t: &Tally| t.neutral),
        ] {
            let _ = write!(s, "{label:<name_w$}");
            for t in &tallies {
                let cell = t.as_ref().map_or("-".to_string(), |t| get(t).to_string());
                let _ = write!(s, "{cell:>col_w$}");
            }
            s.push('\n');
        }
    }

    let failures: Vec<&str> = outcomes
        .iter()
        .filter_map(|o| match o {
            CellOutcome::Failed { cell_id, .. } => Some(cell_id.as_str()),
            _ => None,
        })
        .collect();
    if !failures.is_empty() {
        let _ = writeln!(s, "\nfailed cells: {}", failures.join(", "));
    }
    s
}
