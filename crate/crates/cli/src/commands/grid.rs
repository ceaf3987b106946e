use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::PathBuf;

use clap::Args;
use evoctrl::experiments::{grid_search_from, AxisRange, CellResult, GridSpec};
use evoctrl::{PreparedAlgorithm, ProblemKind, Rate};

use crate::output::{num, Preamble};
use crate::{parse_axis, CliError, Instances, EXIT_RESUME_MISMATCH};

pub const GRID_COLUMNS: [&str; 9] = [
    "A",
    "b",
    "runs",
    "mean",
    "median",
    "stddev",
    "min",
    "max",
    "budget_exceeded_count",
];

#[derive(Args, Debug)]
pub struct GridArgs {
    #[arg(long)]
    pub problem: ProblemKind,
    #[arg(long)]
    pub n: usize,
    /// `min:max:step` or a single value.
    #[arg(long = "A-range", default_value = "1.0:6.0:0.1", value_parser = parse_axis)]
    pub a_range: AxisRange,
    #[arg(long = "b-range", default_value = "0.0:1.0:0.02", value_parser = parse_axis)]
    pub b_range: AxisRange,
    #[arg(long, default_value_t = 101)]
    pub runs_per_cell: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "1/n")]
    pub p0: Rate,
    /// Evaluation budget per run; defaults to 100·n².
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, value_enum, default_value = "random")]
    pub instances: Instances,
    /// Grid CSV; stdout when omitted.
    #[arg(long, short, conflicts_with = "resume")]
    pub output: Option<PathBuf>,
    /// Continue a partially written grid CSV in place.
    #[arg(long)]
    pub resume: Option<PathBuf>,
}

impl GridArgs {
    fn spec(&self) -> Result<GridSpec, CliError> {
        if self.runs_per_cell == 0 {
            return Err(CliError::usage("--runs-per-cell must be at least 1"));
        }
        let spec = GridSpec {
            a_range: self.a_range,
            b_range: self.b_range,
            problem: self.problem,
            n: self.n,
            runs_per_cell: self.runs_per_cell,
            p0: self.p0,
            master_seed: self.seed,
            budget: self.budget,
            instances: self.instances.into(),
        };
        for cell in spec.cells() {
            PreparedAlgorithm::new(&spec.config(&cell), spec.problem, spec.n)?;
        }
        Ok(spec)
    }

    fn preamble(&self, spec: &GridSpec) -> Preamble {
        let mut pre = Preamble::new("grid");
        pre.set("problem", spec.problem)
            .set("n", spec.n)
            .set("algo", "ea-alpha")
            .set("A-range", spec.a_range)
            .set("b-range", spec.b_range)
            .set("p0", num(spec.p0.resolve(spec.n)))
            .set(
                "budget",
                spec.config(&spec.cells()[0]).resolved_budget(spec.n),
            )
            .set("runs_per_cell", spec.runs_per_cell)
            .set("master_seed", spec.master_seed)
            .set("instances", self.instances.as_str());
        pre
    }
}

fn row(c: &CellResult) -> [String; 9] {
    let s = &c.summary;
    [
        num(c.cell.a),
        num(c.cell.b),
        s.runs.to_string(),
        num(s.mean),
        num(s.median),
        num(s.stddev),
        num(s.min),
        num(s.max),
        s.budget_exceeded.to_string(),
    ]
}

fn header_line() -> String {
    GRID_COLUMNS.join(",") + "\n"
}

fn mismatch(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_RESUME_MISMATCH,
        message: message.into(),
    }
}

/// Number of complete rows already in `text` and the byte length they end
/// at. Rows must match the expected cells in order.
fn completed_prefix(
    text: &str,
    preamble: &str,
    spec: &GridSpec,
) -> Result<(usize, usize), CliError> {
    let body = text
        .strip_prefix(preamble)
        .ok_or_else(|| mismatch("metadata of the existing file does not match this invocation"))?;
    let header = header_line();
    let Some(rows) = body.strip_prefix(header.as_str()) else {
        if header.starts_with(body) {
            return Ok((0, preamble.len()));
        }
        return Err(mismatch("unexpected header in the existing file"));
    };
    let cells = spec.cells();
    let mut done = 0;
    let mut offset = preamble.len() + header.len();
    for line in rows.split_inclusive('\n') {
        let Some(content) = line.strip_suffix('\n') else {
            break;
        };
        let fields: Vec<&str> = content.split(',').collect();
        let Some(cell) = cells.get(done) else {
            return Err(mismatch(
                "existing file has more rows than the grid has cells",
            ));
        };
        if fields.len() != GRID_COLUMNS.len() {
            break;
        }
        if fields[0] != num(cell.a) || fields[1] != num(cell.b) {
            return Err(mismatch(format!(
                "row {} is not cell A={}, b={}",
                done + 1,
                cell.a,
                cell.b
            )));
        }
        done += 1;
        offset += line.len();
    }
    Ok((done, offset))
}

pub fn execute(args: &GridArgs) -> Result<(), CliError> {
    let spec = args.spec()?;
    let preamble = args.preamble(&spec).render();

    let write_rows = |out: &mut dyn Write, skip: usize| -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        grid_search_from(&spec, skip, |c| {
            w.write_record(row(c))
                .and_then(|_| w.flush().map_err(Into::into))
                .map_err(|e| evoctrl::Error::InvalidInput(e.to_string()))
        })?;
        w.flush().map_err(CliError::io)
    };

    if let Some(path) = &args.resume {
        let text = fs::read_to_string(path).map_err(CliError::io)?;
        let (done, offset) = completed_prefix(&text, &preamble, &spec)?;
        if done == spec.cell_count() && offset == text.len() {
            return Ok(());
        }
        let file = OpenOptions::new()
            .write(true)
            .open(path)
            .map_err(CliError::io)?;
        file.set_len(offset as u64).map_err(CliError::io)?;
        let mut file = OpenOptions::new()
            .append(true)
            .open(path)
            .map_err(CliError::io)?;
        if offset == preamble.len() {
            file.write_all(header_line().as_bytes())
                .map_err(CliError::io)?;
        }
        return write_rows(&mut file, done);
    }

    let mut out: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(fs::File::create(path).map_err(CliError::io)?),
        None => Box::new(io::stdout().lock()),
    };
    out.write_all(preamble.as_bytes())
        .and_then(|_| out.write_all(header_line().as_bytes()))
        .map_err(CliError::io)?;
    write_rows(&mut out, 0)
}
