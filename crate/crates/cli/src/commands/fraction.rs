use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use evoctrl::experiments::{
    fraction_better, AxisRange, Cell, CellFilter, CellResult, Interval, Summary,
};
use evoctrl::theory::rls_expected_time_lo;
use evoctrl::ProblemKind;

use crate::output::{emit, num, read_preamble, Preamble, Table};
use crate::{parse_axis, CliError};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// Every cell in the file.
    All,
    /// 1 < A ≤ 6 and 0 < b < 1.
    Full,
    /// 1 < A ≤ 2.5 and 0.4 ≤ b < 1.
    Promising,
}

fn parse_interval(s: &str) -> Result<Interval, String> {
    s.parse().map_err(|e: evoctrl::Error| e.to_string())
}

#[derive(Args, Debug)]
pub struct FractionArgs {
    /// Grid CSV written by `evoctrl grid`.
    #[arg(long)]
    pub input: PathBuf,
    /// Baseline mean; defaults to 1 + n²/2 for LeadingOnes grids.
    #[arg(long)]
    pub baseline: Option<f64>,
    /// Improvement thresholds in percent, `min:max:step` or a single value.
    #[arg(long, default_value = "0:25:1", value_parser = parse_axis)]
    pub thresholds: AxisRange,
    #[arg(long, value_enum, default_value = "full")]
    pub filter: Region,
    /// Interval for A such as `(1,2.5]`; overrides the region's.
    #[arg(long = "A-interval", value_parser = parse_interval)]
    pub a_interval: Option<Interval>,
    #[arg(long = "b-interval", value_parser = parse_interval)]
    pub b_interval: Option<Interval>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn read_grid(text: &str) -> Result<Vec<CellResult>, CliError> {
    let bad = |e: &dyn std::fmt::Display| CliError::usage(format!("grid CSV: {e}"));
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| bad(&e))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::usage(format!("grid CSV lacks column {name}")))
    };
    let (ia, ib, iruns, imean, iexceeded) = (
        col("A")?,
        col("b")?,
        col("runs")?,
        col("mean")?,
        col("budget_exceeded_count")?,
    );
    let mut cells = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| bad(&e))?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let float = |i: usize| field(i).parse::<f64>().map_err(|e| bad(&e));
        let int = |i: usize| field(i).parse::<u64>().map_err(|e| bad(&e));
        let (runs, exceeded) = (int(iruns)?, int(iexceeded)?);
        let mean = float(imean)?;
        cells.push(CellResult {
            cell: Cell {
                a_index: 0,
                b_index: 0,
                a: float(ia)?,
                b: float(ib)?,
            },
            summary: Summary {
                runs,
                completed: runs - exceeded.min(runs),
                budget_exceeded: exceeded,
                mean,
                median: f64::NAN,
                stddev: f64::NAN,
                min: f64::NAN,
                max: f64::NAN,
            },
        });
    }
    Ok(cells)
}

pub fn execute(args: &FractionArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.input).map_err(CliError::io)?;
    let meta = read_preamble(&text);
    let lookup = |key: &str| meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
    let cells = read_grid(&text)?;

    let (baseline, source) = match args.baseline {
        Some(b) => (b, "given".to_string()),
        None => {
            let problem = lookup("problem").and_then(|p| p.parse::<ProblemKind>().ok());
            let n = lookup("n").and_then(|n| n.parse::<usize>().ok());
            match (problem, n) {
                (Some(ProblemKind::LeadingOnes), Some(n)) => {
                    (rls_expected_time_lo(n)?, "exact RLS time 1 + n^2/2".into())
                }
                _ => {
                    return Err(CliError::usage(
                        "--baseline is required unless the grid is on LeadingOnes",
                    ))
                }
            }
        }
    };

    let mut filter = match args.filter {
        Region::All => CellFilter::all(),
        Region::Full => CellFilter::full_grid(),
        Region::Promising => CellFilter::promising_region(),
    };
    if let Some(a) = args.a_interval {
        filter.a = a;
    }
    if let Some(b) = args.b_interval {
        filter.b = b;
    }
    let thresholds = args.thresholds.values();
    let curve = fraction_better(&cells, baseline, &thresholds, &filter)?;

    let mut pre = Preamble::new("fraction");
    pre.set("input", args.input.display())
        .set("grid_problem", lookup("problem").unwrap_or("unknown"))
        .set("grid_n", lookup("n").unwrap_or("unknown"))
        .set("baseline", num(baseline))
        .set("baseline_source", source)
        .set("A", filter.a)
        .set("b", filter.b)
        .set("cells", curve.cells);
    let mut table = Table::new(pre, &["threshold", "cells", "better", "fraction"])?;
    for p in &curve.points {
        table.row([
            num(p.threshold),
            curve.cells.to_string(),
            p.better.to_string(),
            num(p.fraction),
        ])?;
    }
    emit(args.output.as_deref(), &table.into_bytes()?)
}
