//! Batch experiments: repeated runs, `(A, b)` grid searches, fraction-better
//! curves and step-size trace aggregation.

pub mod fraction;
pub mod grid;
pub mod repeat;
pub mod stats;
pub mod traces;

pub use fraction::{fraction_better, Bound, CellFilter, FractionCurve, FractionPoint, Interval};
pub use grid::{grid_search, grid_search_from, AxisRange, Cell, CellResult, GridResult, GridSpec};
pub use repeat::{execute_run, repeat_runs, InstanceMode, LevelMean, RepeatResult, RepeatSpec};
pub use stats::{chi_square_gof, ks_two_sample, IntegerMoments, Summary};
pub use traces::{aggregate_traces, LevelSteps, TraceAggregate};
