use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{AlgorithmConfig, PreparedAlgorithm, RunRecord};
use crate::error::{Error, Result};
use crate::experiments::stats::{IntegerMoments, Summary};
use crate::problem::{ProblemInstance, ProblemKind};
use crate::rng::{Purpose, StreamKey};

/// Which hidden instance each run optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceMode {
    /// Fresh uniformly random target (and order) per run.
    #[default]
    Random,
    /// All-ones target, identity order.
    Standard,
}

/// Runs handled per parallel batch; bounds memory when records are dropped.
const CHUNK: u64 = 1024;

/// `runs` independent runs of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RepeatSpec {
    pub config: AlgorithmConfig,
    pub problem: ProblemKind,
    pub n: usize,
    pub runs: u64,
    pub master_seed: u64,
    /// Cell coordinates mixed into every run's seed.
    pub cell: (u32, u32),
    pub instances: InstanceMode,
    /// Return every [`RunRecord`] (otherwise only aggregates).
    pub keep_records: bool,
    pub trace: bool,
}

impl RepeatSpec {
    pub fn new(
        config: AlgorithmConfig,
        problem: ProblemKind,
        n: usize,
        runs: u64,
        master_seed: u64,
    ) -> Self {
        RepeatSpec {
            config,
            problem,
            n,
            runs,
            master_seed,
            cell: (0, 0),
            instances: InstanceMode::Random,
            keep_records: false,
            trace: false,
        }
    }

    pub fn keep_records(mut self) -> Self {
        self.keep_records = true;
        self
    }

    pub fn traced(mut self) -> Self {
        self.trace = true;
        self.keep_records = true;
        self
    }

    pub fn with_cell(mut self, cell: (u32, u32)) -> Self {
        self.cell = cell;
        self
    }
}

/// Mean hitting time of one fitness level over the completed runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelMean {
    pub level: usize,
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepeatResult {
    pub summary: Summary,
    /// Indexed by level `0..=n`. Only runs that reached the optimum
    /// contribute, so every level averages the same runs and the profile is
    /// non-decreasing.
    pub fixed_target: Vec<LevelMean>,
    pub records: Vec<RunRecord>,
}

/// One seeded run: instance and algorithm randomness both derive from `key`.
pub fn execute_run(
    prepared: &PreparedAlgorithm,
    problem: ProblemKind,
    n: usize,
    instances: InstanceMode,
    key: StreamKey,
    trace: bool,
) -> Result<RunRecord> {
    let mut inst = match instances {
        InstanceMode::Random => {
            ProblemInstance::random(problem, n, &mut key.rng(Purpose::Instance))?
        }
        InstanceMode::Standard => ProblemInstance::standard(problem, n)?,
    };
    prepared.run(&mut inst, &mut key.rng(Purpose::Algorithm), trace)
}

/// Executes the runs in parallel. The result is identical for any thread
/// count: each run's stream depends only on its index, and aggregation is
/// an exact integer reduction in run order.
pub fn repeat_runs(spec: &RepeatSpec) -> Result<RepeatResult> {
    if spec.runs == 0 {
        return Err(Error::InvalidParameter {
            name: "runs",
            reason: "must be at least 1".into(),
        });
    }
    let prepared = PreparedAlgorithm::new(&spec.config, spec.problem, spec.n)?;
    let mut outcomes = Vec::with_capacity(spec.runs as usize);
    let mut levels = vec![IntegerMoments::default(); spec.n + 1];
    let mut records = Vec::new();

    let mut start = 0;
    while start < spec.runs {
        let end = (start + CHUNK).min(spec.runs);
        let batch: Vec<RunRecord> = (start..end)
            .into_par_iter()
            .map(|run| {
                let key = StreamKey::new(spec.master_seed, spec.cell, run);
                execute_run(
                    &prepared,
                    spec.problem,
                    spec.n,
                    spec.instances,
                    key,
                    spec.trace,
                )
            })
            .collect::<Result<_>>()?;
        for rec in batch {
            outcomes.push(rec.outcome);
            if rec.outcome.optimization_time().is_some() {
                for (acc, hit) in levels.iter_mut().zip(&rec.fixed_target) {
                    acc.push(hit.expect("completed runs hit every level"));
                }
            }
            if spec.keep_records {
                records.push(rec);
            }
        }
        start = end;
    }

    Ok(RepeatResult {
        summary: Summary::from_outcomes(&outcomes),
        fixed_target: levels
            .iter()
            .enumerate()
            .map(|(level, m)| LevelMean {
                level,
                mean: m.mean(),
                std_error: m.std_error(),
            })
            .collect(),
        records,
    })
}
