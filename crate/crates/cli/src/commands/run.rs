use std::path::PathBuf;

use clap::Args;
use evoctrl::experiments::{repeat_runs, RepeatSpec};
use evoctrl::Outcome;

use crate::output::{emit, num, Preamble, Table};
use crate::{AlgoArgs, CliError};

pub const SUMMARY_COLUMNS: [&str; 13] = [
    "algo",
    "problem",
    "n",
    "A",
    "b",
    "p0",
    "runs",
    "mean",
    "median",
    "stddev",
    "min",
    "max",
    "budget_exceeded",
];

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub algo: AlgoArgs,
    /// Summary CSV; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Also write one row per run to this CSV.
    #[arg(long)]
    pub per_run: Option<PathBuf>,
}

pub fn execute(args: &RunArgs) -> Result<(), CliError> {
    let a = &args.algo;
    let config = a.config()?;
    let mut spec = RepeatSpec::new(config, a.problem, a.n, a.runs, a.seed);
    spec.instances = a.instances.into();
    if args.per_run.is_some() {
        spec = spec.keep_records();
    }
    let res = repeat_runs(&spec)?;

    let mut pre = Preamble::new("run");
    a.describe(&config, &mut pre);
    let s = &res.summary;
    let [col_a, col_b, col_p0] = a.resolved_columns(&config);
    let mut table = Table::new(pre.clone(), &SUMMARY_COLUMNS)?;
    table.row([
        config.algorithm.name().to_string(),
        a.problem.to_string(),
        a.n.to_string(),
        col_a,
        col_b,
        col_p0,
        s.runs.to_string(),
        num(s.mean),
        num(s.median),
        num(s.stddev),
        num(s.min),
        num(s.max),
        s.budget_exceeded.to_string(),
    ])?;
    let summary = table.into_bytes()?;

    let per_run = match &args.per_run {
        Some(_) => {
            let mut t = Table::new(pre, &["run", "evaluations", "status"])?;
            for (i, rec) in res.records.iter().enumerate() {
                let (evals, status) = match rec.outcome {
                    Outcome::Optimum { evaluations } => (evaluations, "optimum"),
                    Outcome::BudgetExceeded { evaluations } => (evaluations, "budget_exceeded"),
                };
                t.row([i.to_string(), evals.to_string(), status.to_string()])?;
            }
            Some(t.into_bytes()?)
        }
        None => None,
    };

    emit(args.output.as_deref(), &summary)?;
    if let (Some(path), Some(bytes)) = (&args.per_run, per_run) {
        emit(Some(path), &bytes)?;
    }
    Ok(())
}
