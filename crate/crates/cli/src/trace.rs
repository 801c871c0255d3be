//! Per-round traces of a single boosting run on the first CV training fold.

use std::fmt::Write as _;
use std::path::Path;

use adabook::boosting::{fit_traced, RoundRecord};
use adabook::evaluation::cv_splits;
use adabook::metrics::{ContingencyTable, MeasureValues};
use anyhow::{Context, Result};
use serde::Serialize;

use crate::{dataset_name, load_dataset, RunArgs};

pub const HEADER: &str = "round,kappa,error,beta,alpha,train_acc,train_inf,w_max,w_min";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn render(trace: &[RoundRecord], stop_reason: &str) -> String {
    let mut s = String::from(HEADER);
    s.push('\n');
    for r in trace {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.round,
            r.kappa,
            r.error,
            opt(r.beta),
            opt(r.alpha),
            r.train_acc,
            r.train_inf,
            r.w_max,
            r.w_min
        );
    }
    let _ = writeln!(s, "# stop_reason={stop_reason}");
    s
}

#[derive(Serialize)]
struct TraceSummary<'a> {
    dataset: String,
    trace: String,
    rounds_run: usize,
    members: usize,
    stop_reason: &'a str,
    test: MeasureValues,
}

pub fn cmd_trace(args: &RunArgs, out: &Path) -> Result<()> {
    let cell = args.cell()?;
    let data = load_dataset(&args.data)?;
    let splits = cv_splits(&data, 1, cell.folds, cell.seed)?;
    let (train, test) = &splits[0];
    let train_data = data.subset(train)?.with_unit_weights();
    let test_data = data.subset(test)?;
    let (ensemble, trace) = fit_traced(&train_data, &cell.boost_config())?;
    let stop = ensemble.stop_reason.name();
    std::fs::write(out, render(&trace, stop)).with_context(|| format!("writing {}", out.display()))?;

    let predicted = ensemble.predict_all(&test_data);
    let table = ContingencyTable::from_indices(data.classes(), &test_data.labels(), &predicted, &vec![1.0; test.len()])?;
    let summary = TraceSummary {
        dataset: dataset_name(&args.data),
        trace: out.display().to_string(),
        rounds_run: ensemble.rounds_run,
        members: ensemble.members.len(),
        stop_reason: stop,
        test: MeasureValues::of(&table),
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}
