use serde::{Deserialize, Serialize};

use crate::algorithms::RunRecord;
use crate::error::{Error, Result};
use crate::problem::ProblemKind;

/// Average step size used in iterations that started at a given fitness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSteps {
    pub fitness: usize,
    pub mean_ell: f64,
    pub iterations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceAggregate {
    pub problem: ProblemKind,
    pub n: usize,
    /// Increasing fitness; levels no iteration started from are left out.
    pub levels: Vec<LevelSteps>,
}

impl TraceAggregate {
    pub fn level(&self, fitness: usize) -> Option<&LevelSteps> {
        self.levels
            .binary_search_by_key(&fitness, |l| l.fitness)
            .ok()
            .map(|i| &self.levels[i])
    }
}

/// Pools the traces of all records by parent fitness.
pub fn aggregate_traces(records: &[RunRecord]) -> Result<TraceAggregate> {
    let first = records
        .first()
        .ok_or_else(|| Error::InvalidInput("no records to aggregate".into()))?;
    let (problem, n) = (first.problem, first.n);
    let mut sums = vec![(0u64, 0u64); n + 1];
    for rec in records {
        if rec.problem != problem || rec.n != n {
            return Err(Error::InvalidInput(format!(
                "mixed traces: {problem} n={n} and {} n={}",
                rec.problem, rec.n
            )));
        }
        let trace = rec
            .trace
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("record without trace".into()))?;
        for step in trace {
            let slot = &mut sums[step.parent_fitness];
            slot.0 += step.ell as u64;
            slot.1 += 1;
        }
    }
    let levels = sums
        .iter()
        .enumerate()
        .filter(|(_, &(_, count))| count > 0)
        .map(|(fitness, &(total, count))| LevelSteps {
            fitness,
            mean_ell: total as f64 / count as f64,
            iterations: count,
        })
        .collect();
    Ok(TraceAggregate { problem, n, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{Outcome, TraceStep};

    fn record(problem: ProblemKind, n: usize, steps: &[(usize, usize)]) -> RunRecord {
        RunRecord {
            problem,
            n,
            outcome: Outcome::Optimum {
                evaluations: steps.len() as u64 + 1,
            },
            fixed_target: vec![Some(1); n + 1],
            trace: Some(
                steps
                    .iter()
                    .enumerate()
                    .map(|(i, &(f, ell))| TraceStep {
                        iteration: i as u64 + 1,
                        parent_fitness: f,
                        ell,
                        rate: None,
                        accepted: true,
                    })
                    .collect(),
            ),
        }
    }

    #[test]
    fn single_iteration() {
        let agg = aggregate_traces(&[record(ProblemKind::LeadingOnes, 10, &[(4, 3)])]).unwrap();
        assert_eq!(agg.levels.len(), 1);
        assert_eq!(agg.level(4).unwrap().mean_ell, 3.0);
        assert!(agg.level(5).is_none());
    }

    #[test]
    fn pools_across_runs() {
        let a = record(ProblemKind::OneMax, 5, &[(2, 1), (2, 3), (3, 1)]);
        let b = record(ProblemKind::OneMax, 5, &[(2, 2), (4, 1)]);
        let agg = aggregate_traces(&[a, b]).unwrap();
        let l2 = agg.level(2).unwrap();
        assert_eq!((l2.mean_ell, l2.iterations), (2.0, 3));
        assert_eq!(
            agg.levels.iter().map(|l| l.fitness).collect::<Vec<_>>(),
            vec![2, 3, 4]
        );
    }

    #[test]
    fn rejects_mixed_or_missing() {
        let a = record(ProblemKind::OneMax, 5, &[(2, 1)]);
        let b = record(ProblemKind::OneMax, 6, &[(2, 1)]);
        let c = record(ProblemKind::LeadingOnes, 5, &[(2, 1)]);
        assert!(aggregate_traces(&[a.clone(), b]).is_err());
        assert!(aggregate_traces(&[a.clone(), c]).is_err());
        let mut untraced = a.clone();
        untraced.trace = None;
        assert!(aggregate_traces(&[a, untraced]).is_err());
        assert!(aggregate_traces(&[]).is_err());
    }
}
