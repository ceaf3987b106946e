use std::path::PathBuf;

use clap::Args;
use evoctrl::experiments::{aggregate_traces, repeat_runs, RepeatSpec};
use evoctrl::theory::OptimalStepTable;
use serde::Serialize;

use crate::output::{emit, num, Preamble, Table};
use crate::{AlgoArgs, CliError, EXIT_SIZE_GUARD};

const MAX_TRACED_RUNS: u64 = 1000;

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[command(flatten)]
    pub algo: AlgoArgs,
    /// One JSON object per iteration.
    #[arg(long)]
    pub jsonl: Option<PathBuf>,
    /// Per-fitness aggregate CSV; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Allow tracing more than 1000 runs.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Serialize)]
struct IterationRecord {
    run: usize,
    iter: u64,
    fitness: usize,
    ell: usize,
    p: Option<f64>,
    accepted: bool,
}

pub fn execute(args: &TraceArgs) -> Result<(), CliError> {
    let a = &args.algo;
    let config = a.config()?;
    if a.runs > MAX_TRACED_RUNS && !args.allow_large {
        return Err(CliError {
            code: EXIT_SIZE_GUARD,
            message: format!(
                "refusing to trace {} runs (limit {MAX_TRACED_RUNS}); pass --allow-large",
                a.runs
            ),
        });
    }
    let mut spec = RepeatSpec::new(config, a.problem, a.n, a.runs, a.seed).traced();
    spec.instances = a.instances.into();
    let res = repeat_runs(&spec)?;
    let agg = aggregate_traces(&res.records)?;
    let kopt = OptimalStepTable::cached(a.problem, a.n)?;

    let mut pre = Preamble::new("trace");
    a.describe(&config, &mut pre);
    let mut table = Table::new(pre, &["fitness", "mean_ell", "kopt", "iteration_count"])?;
    for level in &agg.levels {
        table.row([
            level.fitness.to_string(),
            num(level.mean_ell),
            kopt.step(level.fitness).to_string(),
            level.iterations.to_string(),
        ])?;
    }
    let aggregate = table.into_bytes()?;

    let jsonl = match &args.jsonl {
        Some(_) => {
            let mut out = Vec::new();
            for (run, rec) in res.records.iter().enumerate() {
                for step in rec.trace.iter().flatten() {
                    let r = IterationRecord {
                        run,
                        iter: step.iteration,
                        fitness: step.parent_fitness,
                        ell: step.ell,
                        p: step.rate,
                        accepted: step.accepted,
                    };
                    serde_json::to_writer(&mut out, &r).map_err(CliError::io)?;
                    out.push(b'\n');
                }
            }
            Some(out)
        }
        None => None,
    };

    emit(args.output.as_deref(), &aggregate)?;
    if let (Some(path), Some(bytes)) = (&args.jsonl, jsonl) {
        emit(Some(path), &bytes)?;
    }
    Ok(())
}
