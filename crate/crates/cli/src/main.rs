//! `adabook`: cross-validated boosting experiments from the command line.

mod record;
mod suite;
mod trace;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adabook::boosting::BoostConfig;
use adabook::data::{load_arff, load_csv, ClassColumn, Dataset};
use adabook::learners::LearnerSpec;
use adabook::metrics::MeasureKind;
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use record::{Format, Record};

#[derive(Parser)]
#[command(name = "adabook", version, about = "Boosting with chance-corrected error measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cross-validate one configuration and print its result record.
    Run(RunArgs),
    /// Run every dataset x method cell of a suite file.
    Suite(SuiteArgs),
    /// Boost on the first training fold and write a per-round trace.
    Trace(TraceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LearnerArg {
    Stump,
    Tree,
    Cart,
    Nb,
}

impl LearnerArg {
    pub fn spec(self) -> LearnerSpec {
        use adabook::learners::LearnerKind;
        LearnerSpec::from(match self {
            LearnerArg::Stump => LearnerKind::Stump,
            LearnerArg::Tree => LearnerKind::Tree,
            LearnerArg::Cart => LearnerKind::Cart,
            LearnerArg::Nb => LearnerKind::NaiveBayes,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            LearnerArg::Stump => "stump",
            LearnerArg::Tree => "tree",
            LearnerArg::Cart => "cart",
            LearnerArg::Nb => "nb",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoosterArg {
    Adaboost,
    Multiboost,
    None,
}

impl BoosterArg {
    pub fn name(self) -> &'static str {
        match self {
            BoosterArg::Adaboost => "adaboost",
            BoosterArg::Multiboost => "multiboost",
            BoosterArg::None => "none",
        }
    }
}

fn parse_measure(s: &str) -> Result<MeasureKind, String> {
    s.parse().map_err(|e: adabook::metrics::MetricsError| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// ARFF file, or CSV with a header row and the class in the last column.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = LearnerArg::Stump)]
    pub learner: LearnerArg,
    #[arg(long, value_enum, default_value_t = BoosterArg::Adaboost)]
    pub booster: BoosterArg,
    /// accuracy, kappa, informedness, markedness or matthews.
    #[arg(long, value_parser = parse_measure, default_value = "informedness")]
    pub measure: MeasureKind,
    /// Boosting rounds (default 26, or 1 with --booster none).
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub runs: usize,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// MultiBoost subcommittee count.
    #[arg(long, default_value_t = 3)]
    pub subcommittees: usize,
    /// Write the record here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args)]
struct SuiteArgs {
    /// TOML suite file.
    spec: PathBuf,
    /// Overrides the suite's output directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Overrides the suite's parallel cell limit.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Trace CSV destination.
    #[arg(long)]
    trace: PathBuf,
}

/// A fully resolved experiment cell.
#[derive(Debug, Clone)]
pub struct CellConfig {
    pub learner: LearnerArg,
    pub booster: BoosterArg,
    pub measure: MeasureKind,
    pub iterations: usize,
    pub subcommittees: usize,
    pub runs: usize,
    pub folds: usize,
    pub seed: u64,
}

impl CellConfig {
    pub fn new(
        learner: LearnerArg,
        booster: BoosterArg,
        measure: MeasureKind,
        iterations: Option<usize>,
        subcommittees: usize,
    ) -> Result<Self> {
        let iterations = match (booster, iterations) {
            (BoosterArg::None, Some(n)) if n > 1 => bail!("--booster none trains a single model; got --iterations {n}"),
            (BoosterArg::None, _) => 1,
            (_, Some(n)) => n,
            (_, None) => 26,
        };
        if iterations == 0 {
            bail!("--iterations must be at least 1");
        }
        Ok(Self { learner, booster, measure, iterations, subcommittees, runs: 2, folds: 5, seed: 1 })
    }

    pub fn boost_config(&self) -> BoostConfig {
        let config = BoostConfig::new(self.measure, self.iterations, self.learner.spec()).with_seed(self.seed);
        match self.booster {
            BoosterArg::Multiboost => config.multiboost(self.subcommittees),
            BoosterArg::Adaboost | BoosterArg::None => config,
        }
    }
}

impl RunArgs {
    fn cell(&self) -> Result<CellConfig> {
        let mut cell = CellConfig::new(self.learner, self.booster, self.measure, self.iterations, self.subcommittees)?;
        cell.runs = self.runs;
        cell.folds = self.folds;
        cell.seed = self.seed;
        Ok(cell)
    }
}

pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    let data = match ext.as_str() {
        "csv" => load_csv(path, &ClassColumn::Last, &[]),
        _ => load_arff(path),
    };
    data.with_context(|| format!("loading {}", path.display()))
}

pub fn dataset_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "data".into())
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let cell = args.cell()?;
    let data = load_dataset(&args.data)?;
    let name = dataset_name(&args.data);
    let record = Record::evaluate(&format!("{name}/run"), &name, &data, &cell)?;
    let text = match args.format {
        Format::Json => record.to_json()? + "\n",
        Format::Csv => record.to_csv()?,
    };
    match &args.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args).map(|_| true),
        Command::Suite(args) => suite::cmd_suite(&args.spec, args.out_dir.as_deref(), args.jobs),
        Command::Trace(args) => trace::cmd_trace(&args.run, &args.trace).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
