//! RLS, the drift-maximizing RLS variants, the resampling (1+1) EA and the
//! self-adjusting (1+1) EA, all behind one run-to-optimum interface.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::mutation::FlipSampler;
use crate::problem::{ProblemInstance, ProblemKind};
use crate::step_size::{rate_bounds, StepSizeDistribution};
use crate::theory::OptimalStepTable;

/// Mutation rate, possibly relative to the (not yet known) dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Rate {
    /// `c / n`
    PerDimension(f64),
    Absolute(f64),
}

impl Rate {
    /// The default initial rate `1/n`.
    pub const ONE_OVER_N: Rate = Rate::PerDimension(1.0);

    /// Concrete value for dimension `n`. Symbolic rates are capped at 1/2 so
    /// that `1/n` stays admissible for `n = 1`.
    pub fn resolve(self, n: usize) -> f64 {
        match self {
            Rate::PerDimension(c) => (c / n as f64).min(0.5),
            Rate::Absolute(p) => p,
        }
    }
}

impl Default for Rate {
    fn default() -> Self {
        Rate::ONE_OVER_N
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rate::PerDimension(c) => write!(f, "{c}/n"),
            Rate::Absolute(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Rate {
    type Err = Error;

    /// Accepts `1/n`, `c/n` and decimal literals.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("bad rate {s:?}"));
        if let Some(c) = s.strip_suffix("/n") {
            let c: f64 = c.trim().parse().map_err(|_| bad())?;
            if !(c.is_finite() && c > 0.0) {
                return Err(bad());
            }
            return Ok(Rate::PerDimension(c));
        }
        let p: f64 = s.parse().map_err(|_| bad())?;
        Ok(Rate::Absolute(p))
    }
}

/// Algorithm variant and its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Algorithm {
    /// Always flips one bit.
    Rls,
    /// Flips `k_opt,OM(n, f(x))` bits.
    RlsOptOneMax,
    /// Flips `k_opt,LO(n, f(x)) = ⌊n/(f(x)+1)⌋` bits.
    RlsOptLeadingOnes,
    /// Step size from `Bin_{>0}(n, p)` with a fixed rate.
    EaGt0 { p: Rate },
    /// Step size from `Bin_{>0}(n, p)`; `p ← min(A·p, 1/2)` after an
    /// accepted offspring, `p ← max(b·p, 1/n²)` otherwise.
    EaAlpha { p0: Rate, a: f64, b: f64 },
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Rls => "rls",
            Algorithm::RlsOptOneMax => "rls-opt-om",
            Algorithm::RlsOptLeadingOnes => "rls-opt-lo",
            Algorithm::EaGt0 { .. } => "ea-gt0",
            Algorithm::EaAlpha { .. } => "ea-alpha",
        }
    }
}

/// An algorithm plus its evaluation budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmConfig {
    pub algorithm: Algorithm,
    /// Maximum number of evaluations; `None` means `100·n²`.
    pub budget: Option<u64>,
}

impl AlgorithmConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        AlgorithmConfig {
            algorithm,
            budget: None,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn rls() -> Self {
        Self::new(Algorithm::Rls)
    }

    pub fn ea_gt0(p: Rate) -> Self {
        Self::new(Algorithm::EaGt0 { p })
    }

    pub fn ea_alpha(a: f64, b: f64, p0: Rate) -> Self {
        Self::new(Algorithm::EaAlpha { p0, a, b })
    }

    pub fn resolved_budget(&self, n: usize) -> u64 {
        self.budget
            .unwrap_or_else(|| 100u64.saturating_mul((n as u64).saturating_mul(n as u64)))
    }
}

/// Default evaluation budget `100·n²`.
pub fn default_budget(n: usize) -> u64 {
    AlgorithmConfig::rls().resolved_budget(n)
}

/// Multiplicative rate update, confined to [`rate_bounds`].
pub fn update_rate(p: f64, accepted: bool, a: f64, b: f64, n: usize) -> f64 {
    let (lo, hi) = rate_bounds(n);
    if accepted {
        (a * p).min(hi)
    } else {
        (b * p).max(lo)
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    /// The optimum was evaluated as evaluation number `evaluations`.
    Optimum { evaluations: u64 },
    /// The budget ran out first.
    BudgetExceeded { evaluations: u64 },
}

impl Outcome {
    pub fn optimization_time(&self) -> Option<u64> {
        match *self {
            Outcome::Optimum { evaluations } => Some(evaluations),
            Outcome::BudgetExceeded { .. } => None,
        }
    }

    pub fn evaluations(&self) -> u64 {
        match *self {
            Outcome::Optimum { evaluations } | Outcome::BudgetExceeded { evaluations } => {
                evaluations
            }
        }
    }
}

/// One iteration of a traced run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub iteration: u64,
    /// Fitness of the parent, which is also the best-so-far fitness.
    pub parent_fitness: usize,
    pub ell: usize,
    /// Mutation rate used for this iteration (before its update); `None`
    /// for the RLS variants.
    pub rate: Option<f64>,
    pub accepted: bool,
}

/// Result of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub problem: ProblemKind,
    pub n: usize,
    pub outcome: Outcome,
    /// `fixed_target[i]`: first evaluation at which the best-so-far fitness
    /// was at least `i`; `None` if never.
    pub fixed_target: Vec<Option<u64>>,
    pub trace: Option<Vec<TraceStep>>,
}

/// A validated configuration bound to a problem kind and dimension, ready
/// to run many times.
#[derive(Debug, Clone)]
pub struct PreparedAlgorithm {
    problem: ProblemKind,
    n: usize,
    budget: u64,
    rule: StepRule,
}

#[derive(Debug, Clone)]
enum StepRule {
    Single,
    Table(Arc<OptimalStepTable>),
    Static(StepSizeDistribution),
    Adaptive { p0: f64, a: f64, b: f64 },
}

impl PreparedAlgorithm {
    pub fn new(config: &AlgorithmConfig, problem: ProblemKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let budget = config.resolved_budget(n);
        if budget == 0 {
            return Err(Error::InvalidParameter {
                name: "budget",
                reason: "must be at least 1".into(),
            });
        }
        let rule = match config.algorithm {
            Algorithm::Rls => StepRule::Single,
            Algorithm::RlsOptOneMax | Algorithm::RlsOptLeadingOnes => {
                let wanted = if config.algorithm == Algorithm::RlsOptOneMax {
                    ProblemKind::OneMax
                } else {
                    ProblemKind::LeadingOnes
                };
                if wanted != problem {
                    return Err(Error::IncompatibleProblem {
                        variant: config.algorithm.name(),
                        problem: problem.as_str(),
                    });
                }
                StepRule::Table(OptimalStepTable::cached(problem, n)?)
            }
            Algorithm::EaGt0 { p } => StepRule::Static(checked_rate("p", p, n)?),
            Algorithm::EaAlpha { p0, a, b } => {
                if !(a.is_finite() && a >= 1.0) {
                    return Err(Error::InvalidParameter {
                        name: "A",
                        reason: format!("{a} is not a finite value >= 1"),
                    });
                }
                // b = 0 is allowed: the grid search's bottom row uses it
                if !(0.0..=1.0).contains(&b) {
                    return Err(Error::InvalidParameter {
                        name: "b",
                        reason: format!("{b} outside [0, 1]"),
                    });
                }
                let p0 = checked_rate("p0", p0, n)?.rate();
                StepRule::Adaptive { p0, a, b }
            }
        };
        Ok(PreparedAlgorithm {
            problem,
            n,
            budget,
            rule,
        })
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Runs until the optimum is evaluated or the budget is spent.
    ///
    /// The uniform random initial point counts as evaluation 1. Offspring
    /// replace the parent when their fitness is at least as good; for the
    /// self-adjusting EA such ties count as successes.
    pub fn run<R: Rng + ?Sized>(
        &self,
        inst: &mut ProblemInstance,
        rng: &mut R,
        trace: bool,
    ) -> Result<RunRecord> {
        let n = self.n;
        if inst.dimension() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: inst.dimension(),
            });
        }
        if inst.kind() != self.problem {
            return Err(Error::IncompatibleProblem {
                variant: "prepared algorithm",
                problem: inst.kind().as_str(),
            });
        }
        let start_evals = inst.evaluations();
        let used = |inst: &ProblemInstance| inst.evaluations() - start_evals;

        let mut x = BitString::random(n, rng)?;
        let mut fx = inst.evaluate(&x)?;
        let mut fixed_target = vec![None; n + 1];
        fixed_target[..=fx].fill(Some(1));
        let mut steps = trace.then(Vec::new);
        let mut sampler = FlipSampler::new(n)?;
        let mut p = match self.rule {
            StepRule::Static(ref d) => d.rate(),
            StepRule::Adaptive { p0, .. } => p0,
            _ => f64::NAN,
        };

        let mut iteration = 0u64;
        while fx < n && used(inst) < self.budget {
            iteration += 1;
            let ell = match &self.rule {
                StepRule::Single => 1,
                StepRule::Table(t) => t.step(fx),
                StepRule::Static(d) => d.sample(rng),
                StepRule::Adaptive { .. } => StepSizeDistribution::new(n, p)?.sample(rng),
            };
            let flips = sampler.sample(ell, rng)?;
            x.flip_all(flips);
            let fy = inst.evaluate(&x)?;
            let accepted = fy >= fx;
            if let Some(steps) = steps.as_mut() {
                steps.push(TraceStep {
                    iteration,
                    parent_fitness: fx,
                    ell,
                    rate: (!p.is_nan()).then_some(p),
                    accepted,
                });
            }
            if accepted {
                if fy > fx {
                    fixed_target[fx + 1..=fy].fill(Some(used(inst)));
                }
                fx = fy;
            } else {
                x.flip_all(flips);
            }
            if let StepRule::Adaptive { a, b, .. } = self.rule {
                p = update_rate(p, accepted, a, b, n);
            }
        }

        let evaluations = used(inst);
        let outcome = if fx == n {
            Outcome::Optimum { evaluations }
        } else {
            Outcome::BudgetExceeded { evaluations }
        };
        Ok(RunRecord {
            problem: self.problem,
            n,
            outcome,
            fixed_target,
            trace: steps,
        })
    }
}

fn checked_rate(name: &'static str, rate: Rate, n: usize) -> Result<StepSizeDistribution> {
    let p = rate.resolve(n);
    StepSizeDistribution::new(n, p).map_err(|e| match e {
        Error::InvalidParameter { reason, .. } => Error::InvalidParameter { name, reason },
        other => other,
    })
}

/// Validates `config` against `inst` and performs one run.
pub fn run<R: Rng + ?Sized>(
    config: &AlgorithmConfig,
    inst: &mut ProblemInstance,
    rng: &mut R,
    trace: bool,
) -> Result<RunRecord> {
    PreparedAlgorithm::new(config, inst.kind(), inst.dimension())?.run(inst, rng, trace)
}
