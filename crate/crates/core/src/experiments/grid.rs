use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{AlgorithmConfig, Outcome, PreparedAlgorithm, Rate};
use crate::error::{Error, Result};
use crate::experiments::repeat::{execute_run, InstanceMode};
use crate::experiments::stats::Summary;
use crate::problem::ProblemKind;
use crate::rng::StreamKey;

// Axis values are snapped to this resolution so that 0.02·20 compares equal
// to a literal 0.4.
const SNAP: f64 = 1e9;

/// Inclusive arithmetic range `min, min+step, …, max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

#[allow(clippy::len_without_is_empty)]
impl AxisRange {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        let ok = min.is_finite() && max.is_finite() && step.is_finite() && min <= max && step > 0.0;
        if !ok {
            return Err(Error::InvalidInput(format!("bad range {min}:{max}:{step}")));
        }
        Ok(AxisRange { min, max, step })
    }

    pub fn single(v: f64) -> Result<Self> {
        Self::new(v, v, 1.0)
    }

    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn value(&self, index: usize) -> f64 {
        ((self.min + index as f64 * self.step) * SNAP).round() / SNAP
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }
}

impl fmt::Display for AxisRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.step)
    }
}

impl FromStr for AxisRange {
    type Err = Error;

    /// `min:max:step`, or a single value.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad range {s:?}")))
        };
        match parts.as_slice() {
            [v] => Self::single(num(v)?),
            [lo, hi, step] => Self::new(num(lo)?, num(hi)?, num(step)?),
            _ => Err(Error::InvalidInput(format!(
                "bad range {s:?}, want min:max:step"
            ))),
        }
    }
}

/// Grid search over the update strengths `(A, b)` of the self-adjusting EA.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub a_range: AxisRange,
    pub b_range: AxisRange,
    pub problem: ProblemKind,
    pub n: usize,
    pub runs_per_cell: u64,
    pub p0: Rate,
    pub master_seed: u64,
    /// `None` means the default `100·n²`.
    pub budget: Option<u64>,
    pub instances: InstanceMode,
}

impl GridSpec {
    /// `A ∈ {1.0, 1.1, …, 6.0}`, `b ∈ {0.00, 0.02, …, 1.00}`, 101 runs per
    /// cell, `p0 = 1/n`.
    pub fn full(problem: ProblemKind, n: usize, master_seed: u64) -> Self {
        GridSpec {
            a_range: AxisRange {
                min: 1.0,
                max: 6.0,
                step: 0.1,
            },
            b_range: AxisRange {
                min: 0.0,
                max: 1.0,
                step: 0.02,
            },
            problem,
            n,
            runs_per_cell: 101,
            p0: Rate::ONE_OVER_N,
            master_seed,
            budget: None,
            instances: InstanceMode::Random,
        }
    }

    /// Cells in A-major order.
    pub fn cells(&self) -> Vec<Cell> {
        let bs = self.b_range.values();
        self.a_range
            .values()
            .into_iter()
            .enumerate()
            .flat_map(|(ia, a)| {
                bs.iter().enumerate().map(move |(ib, &b)| Cell {
                    a_index: ia as u32,
                    b_index: ib as u32,
                    a,
                    b,
                })
            })
            .collect()
    }

    pub fn cell_count(&self) -> usize {
        self.a_range.len() * self.b_range.len()
    }

    pub fn config(&self, cell: &Cell) -> AlgorithmConfig {
        AlgorithmConfig {
            budget: self.budget,
            ..AlgorithmConfig::ea_alpha(cell.a, cell.b, self.p0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub a_index: u32,
    pub b_index: u32,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub cell: Cell,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridResult {
    /// A-major order.
    pub cells: Vec<CellResult>,
}

const CELLS_PER_BATCH: usize = 16;

/// Runs every cell; see [`grid_search_from`].
pub fn grid_search(spec: &GridSpec) -> Result<GridResult> {
    let mut cells = Vec::with_capacity(spec.cell_count());
    grid_search_from(spec, 0, |c| {
        cells.push(*c);
        Ok(())
    })?;
    Ok(GridResult { cells })
}

/// Runs the cells from position `skip` on, reporting each finished cell to
/// `on_cell` in A-major order, so a consumer can persist progress and a
/// later call can resume after the last reported cell.
///
/// Run `r` of the cell with indices `(i, j)` uses the stream
/// `(master_seed, (i, j), r)`. Results do not depend on the thread count.
pub fn grid_search_from<F>(spec: &GridSpec, skip: usize, mut on_cell: F) -> Result<()>
where
    F: FnMut(&CellResult) -> Result<()>,
{
    if spec.runs_per_cell == 0 {
        return Err(Error::InvalidParameter {
            name: "runs_per_cell",
            reason: "must be at least 1".into(),
        });
    }
    let cells = spec.cells();
    let prepared: Vec<PreparedAlgorithm> = cells
        .iter()
        .skip(skip)
        .map(|c| PreparedAlgorithm::new(&spec.config(c), spec.problem, spec.n))
        .collect::<Result<_>>()?;
    let runs = spec.runs_per_cell;

    for (batch_no, batch) in cells[skip.min(cells.len())..]
        .chunks(CELLS_PER_BATCH)
        .enumerate()
    {
        let offset = batch_no * CELLS_PER_BATCH;
        let outcomes: Vec<Outcome> = (0..batch.len() as u64 * runs)
            .into_par_iter()
            .map(|task| {
                let local = (task / runs) as usize;
                let cell = &batch[local];
                let key =
                    StreamKey::new(spec.master_seed, (cell.a_index, cell.b_index), task % runs);
                execute_run(
                    &prepared[offset + local],
                    spec.problem,
                    spec.n,
                    spec.instances,
                    key,
                    false,
                )
                .map(|r| r.outcome)
            })
            .collect::<Result<_>>()?;
        for (cell, chunk) in batch.iter().zip(outcomes.chunks(runs as usize)) {
            on_cell(&CellResult {
                cell: *cell,
                summary: Summary::from_outcomes(chunk),
            })?;
        }
    }
    Ok(())
}
