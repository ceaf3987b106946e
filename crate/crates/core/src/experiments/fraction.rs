use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::grid::CellResult;

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub value: f64,
    pub inclusive: bool,
}

/// A real interval with optional, open or closed ends. Membership is
/// decided with a `1e-9` slack so grid values like `0.02·20` behave as
/// their decimal literals.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Interval {
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
}

impl Interval {
    pub fn unbounded() -> Self {
        Interval::default()
    }

    pub fn open_closed(lo: f64, hi: f64) -> Self {
        Interval {
            lower: Some(Bound {
                value: lo,
                inclusive: false,
            }),
            upper: Some(Bound {
                value: hi,
                inclusive: true,
            }),
        }
    }

    pub fn closed_open(lo: f64, hi: f64) -> Self {
        Interval {
            lower: Some(Bound {
                value: lo,
                inclusive: true,
            }),
            upper: Some(Bound {
                value: hi,
                inclusive: false,
            }),
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Interval {
            lower: Some(Bound {
                value: lo,
                inclusive: false,
            }),
            upper: Some(Bound {
                value: hi,
                inclusive: false,
            }),
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        let above = self.lower.is_none_or(|b| {
            if b.inclusive {
                v >= b.value - EPS
            } else {
                v > b.value + EPS
            }
        });
        let below = self.upper.is_none_or(|b| {
            if b.inclusive {
                v <= b.value + EPS
            } else {
                v < b.value - EPS
            }
        });
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lower {
            Some(b) => write!(f, "{}{}", if b.inclusive { '[' } else { '(' }, b.value)?,
            None => f.write_str("(")?,
        }
        f.write_str(",")?;
        match self.upper {
            Some(b) => write!(f, "{}{}", b.value, if b.inclusive { ']' } else { ')' }),
            None => f.write_str(")"),
        }
    }
}

impl FromStr for Interval {
    type Err = Error;

    /// Interval notation such as `(1,6]`, `[0.4,1)` or `(,2.5]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("bad interval {s:?}"));
        let s = s.trim();
        let (open_ch, rest) = s.split_at_checked(1).ok_or_else(bad)?;
        let (body, close_ch) = rest
            .split_at_checked(rest.len().saturating_sub(1))
            .ok_or_else(bad)?;
        let (lo, hi) = body.split_once(',').ok_or_else(bad)?;
        let bound = |t: &str, inclusive: bool| -> Result<Option<Bound>> {
            let t = t.trim();
            if t.is_empty() {
                return Ok(None);
            }
            let value = t.parse().map_err(|_| bad())?;
            Ok(Some(Bound { value, inclusive }))
        };
        let lower = match open_ch {
            "[" => bound(lo, true)?,
            "(" => bound(lo, false)?,
            _ => return Err(bad()),
        };
        let upper = match close_ch {
            "]" => bound(hi, true)?,
            ")" => bound(hi, false)?,
            _ => return Err(bad()),
        };
        Ok(Interval { lower, upper })
    }
}

/// Selects grid cells by their `(A, b)` values.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CellFilter {
    pub a: Interval,
    pub b: Interval,
}

impl CellFilter {
    pub fn all() -> Self {
        CellFilter::default()
    }

    /// `1 < A ≤ 6`, `0 < b < 1`: 2,450 cells of the full grid.
    pub fn full_grid() -> Self {
        CellFilter {
            a: Interval::open_closed(1.0, 6.0),
            b: Interval::open(0.0, 1.0),
        }
    }

    /// `1 < A ≤ 2.5`, `0.4 ≤ b < 1`: 450 cells of the full grid.
    pub fn promising_region() -> Self {
        CellFilter {
            a: Interval::open_closed(1.0, 2.5),
            b: Interval::closed_open(0.4, 1.0),
        }
    }

    pub fn accepts(&self, a: f64, b: f64) -> bool {
        self.a.contains(a) && self.b.contains(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionPoint {
    /// Improvement over the baseline, in percent.
    pub threshold: f64,
    pub better: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionCurve {
    pub cells: usize,
    pub points: Vec<FractionPoint>,
}

/// For each threshold `t`, the share of filtered cells whose mean
/// optimization time is at most `baseline_mean·(1 - t/100)`.
///
/// A cell with any budget-exceeded run is compared as if its mean were
/// infinite, since its reported mean covers only the runs that finished.
fn effective_mean(c: &CellResult) -> f64 {
    if c.summary.budget_exceeded > 0 {
        f64::INFINITY
    } else {
        c.summary.mean
    }
}

pub fn fraction_better(
    cells: &[CellResult],
    baseline_mean: f64,
    thresholds: &[f64],
    filter: &CellFilter,
) -> Result<FractionCurve> {
    let selected: Vec<&CellResult> = cells
        .iter()
        .filter(|c| filter.accepts(c.cell.a, c.cell.b))
        .collect();
    if selected.is_empty() {
        return Err(Error::InvalidInput("no grid cell passes the filter".into()));
    }
    let points = thresholds
        .iter()
        .map(|&t| {
            let limit = baseline_mean * (1.0 - t / 100.0);
            let better = selected
                .iter()
                .filter(|c| effective_mean(c) <= limit)
                .count();
            FractionPoint {
                threshold: t,
                better,
                fraction: better as f64 / selected.len() as f64,
            }
        })
        .collect();
    Ok(FractionCurve {
        cells: selected.len(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::grid::{Cell, GridSpec};
    use crate::experiments::stats::Summary;
    use crate::problem::ProblemKind;

    fn cell(a: f64, b: f64, mean: f64, exceeded: u64) -> CellResult {
        CellResult {
            cell: Cell {
                a_index: 0,
                b_index: 0,
                a,
                b,
            },
            summary: Summary {
                runs: 10,
                completed: 10 - exceeded,
                budget_exceeded: exceeded,
                mean,
                median: mean,
                stddev: 0.0,
                min: mean,
                max: mean,
            },
        }
    }

    #[test]
    fn filters_count_like_the_reference_grid() {
        let cells = GridSpec::full(ProblemKind::LeadingOnes, 10, 0).cells();
        let count = |f: CellFilter| cells.iter().filter(|c| f.accepts(c.a, c.b)).count();
        assert_eq!(count(CellFilter::all()), 2601);
        assert_eq!(count(CellFilter::full_grid()), 2450);
        assert_eq!(count(CellFilter::promising_region()), 450);
    }

    #[test]
    fn infinite_baseline_threshold_zero() {
        let cells = [
            cell(1.5, 0.5, 1e9, 0),
            cell(2.0, 0.5, 3.0, 0),
            cell(2.0, 0.6, f64::NAN, 10),
        ];
        let curve = fraction_better(&cells, f64::INFINITY, &[0.0], &CellFilter::all()).unwrap();
        assert_eq!(curve.points[0].fraction, 1.0);
    }

    #[test]
    fn thresholds_and_budget_flags() {
        let cells = [
            cell(1.5, 0.5, 80.0, 0),
            cell(1.5, 0.6, 89.0, 0),
            cell(1.5, 0.7, 95.0, 0),
            cell(1.5, 0.8, 50.0, 2),
        ];
        let curve =
            fraction_better(&cells, 100.0, &[0.0, 10.0, 20.0, 25.0], &CellFilter::all()).unwrap();
        let fr: Vec<usize> = curve.points.iter().map(|p| p.better).collect();
        assert_eq!(fr, vec![3, 2, 1, 0]);
        assert_eq!(curve.points[1].fraction, 0.5);
    }

    #[test]
    fn empty_selection_rejected() {
        let cells = [cell(1.0, 0.5, 1.0, 0)];
        assert!(fraction_better(&cells, 10.0, &[0.0], &CellFilter::full_grid()).is_err());
    }

    #[test]
    fn interval_syntax() {
        let i: Interval = "(1,6]".parse().unwrap();
        assert_eq!(i, Interval::open_closed(1.0, 6.0));
        assert_eq!(i.to_string(), "(1,6]");
        let j: Interval = "[0.4,)".parse().unwrap();
        assert!(j.contains(0.4) && j.contains(1e6) && !j.contains(0.39));
        assert!("1,2".parse::<Interval>().is_err());
        assert!("(a,2]".parse::<Interval>().is_err());
    }
}
