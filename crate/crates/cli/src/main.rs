//! `evoctrl`: runs, grid searches, theory tables, traces and fraction
//! curves, written as CSV with a `#` metadata preamble.

mod commands;
mod output;

use std::fmt;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use evoctrl::experiments::{AxisRange, InstanceMode};
use evoctrl::{Algorithm, AlgorithmConfig, ProblemKind, Rate};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RESUME_MISMATCH: u8 = 3;
pub const EXIT_SIZE_GUARD: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(e: impl fmt::Display) -> Self {
        CliError {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<evoctrl::Error> for CliError {
    fn from(e: evoctrl::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "evoctrl",
    version,
    about = "Self-adjusting mutation rates on OneMax and LeadingOnes"
)]
struct Cli {
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true, env = "EVOCTRL_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Repeated runs of one algorithm, summarized.
    Run(commands::run::RunArgs),
    /// Runs the self-adjusting EA for every (A, b) cell of a grid.
    Grid(commands::grid::GridArgs),
    /// Tables of the exact runtime quantities.
    Theory(commands::theory::TheoryArgs),
    /// Per-iteration step sizes and their per-fitness averages.
    Trace(commands::trace::TraceArgs),
    /// Share of grid cells beating a baseline by given margins.
    Fraction(commands::fraction::FractionArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgoName {
    Rls,
    RlsOptOm,
    RlsOptLo,
    EaGt0,
    EaAlpha,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Instances {
    /// Random hidden target and bit order per run.
    Random,
    /// All-ones target, identity order.
    Standard,
}

impl From<Instances> for InstanceMode {
    fn from(i: Instances) -> Self {
        match i {
            Instances::Random => InstanceMode::Random,
            Instances::Standard => InstanceMode::Standard,
        }
    }
}

impl Instances {
    pub fn as_str(self) -> &'static str {
        match self {
            Instances::Random => "random",
            Instances::Standard => "standard",
        }
    }
}

/// Flags shared by `run` and `trace`.
#[derive(Args, Debug, Clone)]
pub struct AlgoArgs {
    #[arg(long)]
    pub problem: ProblemKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub algo: AlgoName,
    /// Initial or static mutation rate: `1/n`, `c/n` or a decimal.
    #[arg(long)]
    pub p0: Option<Rate>,
    /// Rate factor after a success (ea-alpha).
    #[arg(long = "A")]
    pub a: Option<f64>,
    /// Rate factor after a failure (ea-alpha).
    #[arg(long = "b")]
    pub b: Option<f64>,
    /// Evaluation budget per run; defaults to 100·n².
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub runs: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "random")]
    pub instances: Instances,
}

impl AlgoArgs {
    pub fn config(&self) -> Result<AlgorithmConfig, CliError> {
        let uses_rate = matches!(self.algo, AlgoName::EaGt0 | AlgoName::EaAlpha);
        if !uses_rate && self.p0.is_some() {
            return Err(CliError::usage("--p0 only applies to ea-gt0 and ea-alpha"));
        }
        if self.algo != AlgoName::EaAlpha && (self.a.is_some() || self.b.is_some()) {
            return Err(CliError::usage("--A and --b only apply to ea-alpha"));
        }
        let p0 = self.p0.unwrap_or(Rate::ONE_OVER_N);
        let algorithm = match self.algo {
            AlgoName::Rls => Algorithm::Rls,
            AlgoName::RlsOptOm => Algorithm::RlsOptOneMax,
            AlgoName::RlsOptLo => Algorithm::RlsOptLeadingOnes,
            AlgoName::EaGt0 => Algorithm::EaGt0 { p: p0 },
            AlgoName::EaAlpha => {
                let a = self
                    .a
                    .ok_or_else(|| CliError::usage("ea-alpha requires --A"))?;
                let b = self
                    .b
                    .ok_or_else(|| CliError::usage("ea-alpha requires --b"))?;
                Algorithm::EaAlpha { p0, a, b }
            }
        };
        let mut config = AlgorithmConfig::new(algorithm);
        config.budget = self.budget;
        // reject bad parameters before anything is written
        evoctrl::PreparedAlgorithm::new(&config, self.problem, self.n)?;
        if self.runs == 0 {
            return Err(CliError::usage("--runs must be at least 1"));
        }
        Ok(config)
    }

    /// Resolved `(A, b, p0)` columns; empty where they do not apply.
    pub fn resolved_columns(&self, config: &AlgorithmConfig) -> [String; 3] {
        let n = self.n;
        match config.algorithm {
            Algorithm::EaAlpha { p0, a, b } => {
                [output::num(a), output::num(b), output::num(p0.resolve(n))]
            }
            Algorithm::EaGt0 { p } => [String::new(), String::new(), output::num(p.resolve(n))],
            _ => Default::default(),
        }
    }

    pub fn describe(&self, config: &AlgorithmConfig, pre: &mut output::Preamble) {
        let [a, b, p0] = self.resolved_columns(config);
        pre.set("problem", self.problem)
            .set("n", self.n)
            .set("algo", config.algorithm.name());
        if !a.is_empty() {
            pre.set("A", a).set("b", b);
        }
        if !p0.is_empty() {
            pre.set("p0", p0);
        }
        pre.set("budget", config.resolved_budget(self.n))
            .set("runs", self.runs)
            .set("master_seed", self.seed)
            .set("instances", self.instances.as_str());
    }
}

pub fn parse_axis(s: &str) -> Result<AxisRange, String> {
    s.parse().map_err(|e: evoctrl::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Run(args) => commands::run::execute(args),
        Command::Grid(args) => commands::grid::execute(args),
        Command::Theory(args) => commands::theory::execute(args),
        Command::Trace(args) => commands::trace::execute(args),
        Command::Fraction(args) => commands::fraction::execute(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
