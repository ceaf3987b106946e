//! Exact expected progress, improvement probabilities and optimal step sizes
//! for OneMax and LeadingOnes under the `mut_ℓ` operator.
//!
//! Ratios of binomial coefficients are never formed as a quotient of two
//! separately computed coefficients: `C(1500, 750)` alone overflows `f64`.
//! Instead they are built as products of term-wise ratios, or from a
//! log-space starting term followed by a ratio recurrence.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};
use crate::problem::ProblemKind;

/// Relative margin below which two drifts count as tied. Ties go to the
/// smaller step size.
const TIE_TOLERANCE: f64 = 1e-11;

fn check_fitness(n: usize, f: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if f >= n {
        return Err(Error::InvalidFitness { f, max: n - 1 });
    }
    Ok(())
}

fn check_step(n: usize, ell: usize) -> Result<()> {
    if ell == 0 || ell > n {
        return Err(Error::InvalidStep { ell, n });
    }
    Ok(())
}

/// Expected OneMax gain `E[max{Om(mut_ℓ(x)) - Om(x), 0}]` at fitness `f`:
///
/// `Σ_i C(n-f, i) C(f, ℓ-i) (2i - ℓ) / C(n, ℓ)`, summed over the split
/// `i` (bits flipped from wrong to right) for which the offspring improves.
pub fn onemax_drift(n: usize, f: usize, ell: usize) -> Result<f64> {
    check_fitness(n, f)?;
    check_step(n, ell)?;
    Ok(drift_unchecked(n, f, ell))
}

fn drift_unchecked(n: usize, f: usize, ell: usize) -> f64 {
    let wrong = n - f;
    // terms outside [lo, hi] vanish: out-of-support binomials or no gain
    let lo = ell.div_ceil(2).max(ell.saturating_sub(f));
    let hi = ell.min(wrong);
    if lo > hi {
        return 0.0;
    }
    // The summand without the (2i - ℓ) weight is the hypergeometric pmf of
    // wrong bits among the flipped ones. Start at its mode (clamped into
    // range) so the starting term cannot underflow while other terms matter.
    let mode = ((ell + 1) * (wrong + 1)) / (n + 2);
    let start = mode.clamp(lo, hi);
    let ln_start = ln_binomial(wrong as u64, start as u64)
        + ln_binomial(f as u64, (ell - start) as u64)
        - ln_binomial(n as u64, ell as u64);
    let h_start = ln_start.exp();
    let weight = |i: usize| (2 * i) as f64 - ell as f64;

    let mut sum = h_start * weight(start);
    let mut h = h_start;
    for i in start..hi {
        h *= (wrong - i) as f64 / (i + 1) as f64 * (ell - i) as f64 / (f + i + 1 - ell) as f64;
        sum += h * weight(i + 1);
    }
    let mut h = h_start;
    for i in (lo + 1..=start).rev() {
        h *= i as f64 / (wrong - i + 1) as f64 * (f + i - ell) as f64 / (ell - i + 1) as f64;
        sum += h * weight(i - 1);
    }
    sum
}

/// Drift-maximizing step size on OneMax at fitness `f`; smallest on ties.
pub fn k_opt_onemax(n: usize, f: usize) -> Result<usize> {
    check_fitness(n, f)?;
    Ok(k_opt_onemax_unchecked(n, f))
}

fn k_opt_onemax_unchecked(n: usize, f: usize) -> usize {
    // no step beyond 2(n - f) can gain anything
    let max_ell = n.min(2 * (n - f));
    let mut best = (1, drift_unchecked(n, f, 1));
    for ell in 2..=max_ell {
        let d = drift_unchecked(n, f, ell);
        if d > best.1 * (1.0 + TIE_TOLERANCE) {
            best = (ell, d);
        }
    }
    best.0
}

/// `P[Lo(mut_ℓ(x)) > Lo(x)] = C(n-f-1, ℓ-1) / C(n, ℓ)` at fitness `f`.
///
/// The `(f+1)`-st bit must flip and none of the first `f`. Evaluated as
/// `(ℓ/n) Π_{t=1}^{ℓ-1} (n-f-t)/(n-t)`.
pub fn lo_improve_prob(n: usize, f: usize, ell: usize) -> Result<f64> {
    check_fitness(n, f)?;
    check_step(n, ell)?;
    Ok(lo_improve_prob_unchecked(n, f, ell))
}

fn lo_improve_prob_unchecked(n: usize, f: usize, ell: usize) -> f64 {
    if ell > n - f {
        return 0.0;
    }
    (1..ell).fold(ell as f64 / n as f64, |acc, t| {
        acc * (n - f - t) as f64 / (n - t) as f64
    })
}

/// Step size maximizing the LeadingOnes improvement probability at fitness
/// `f`: `⌊n/(f+1)⌋`, which is the smallest maximizer when two are tied.
pub fn k_opt_leadingones(n: usize, f: usize) -> Result<usize> {
    check_fitness(n, f)?;
    Ok(n / (f + 1))
}

/// Expected evaluations for the LeadingOnes drift maximizer to reach
/// fitness at least `i`:
///
/// `1 + ½ Σ_{j<i} C(n, k_j) / C(n-j-1, k_j - 1)` with `k_j = ⌊n/(j+1)⌋`.
///
/// The `1` is the initial evaluation and the `½` reflects that each level
/// is skipped with probability one half by a uniform random start.
pub fn fixed_target_time_lo(n: usize, i: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if i > n {
        return Err(Error::InvalidFitness { f: i, max: n });
    }
    Ok(1.0 + 0.5 * (0..i).map(|j| lo_waiting_time(n, j)).sum::<f64>())
}

/// [`fixed_target_time_lo`] for every target `0..=n` in one pass.
pub fn fixed_target_profile_lo(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut partial = 0.0;
    out.push(1.0);
    for j in 0..n {
        partial += lo_waiting_time(n, j);
        out.push(1.0 + 0.5 * partial);
    }
    Ok(out)
}

// expected iterations to leave level j with the optimal step size
fn lo_waiting_time(n: usize, j: usize) -> f64 {
    1.0 / lo_improve_prob_unchecked(n, j, n / (j + 1))
}

/// Expected LeadingOnes optimization time of RLS, `1 + n²/2`.
pub fn rls_expected_time_lo(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let n = n as f64;
    Ok(1.0 + n * n / 2.0)
}

/// Optimal step size for every non-terminal fitness `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalStepTable {
    problem: ProblemKind,
    steps: Vec<usize>,
}

impl OptimalStepTable {
    pub fn new(problem: ProblemKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let steps = match problem {
            ProblemKind::LeadingOnes => (0..n).map(|f| n / (f + 1)).collect(),
            ProblemKind::OneMax => (0..n)
                .into_par_iter()
                .map(|f| k_opt_onemax_unchecked(n, f))
                .collect(),
        };
        Ok(OptimalStepTable { problem, steps })
    }

    /// Shared table for `(problem, n)`, built on first use.
    pub fn cached(problem: ProblemKind, n: usize) -> Result<Arc<Self>> {
        type Cache = Mutex<HashMap<(ProblemKind, usize), Arc<OptimalStepTable>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().unwrap().get(&(problem, n)) {
            return Ok(Arc::clone(t));
        }
        // built outside the lock; a racing builder produces the same table
        let table = Arc::new(Self::new(problem, n)?);
        let mut guard = cache.lock().unwrap();
        Ok(Arc::clone(guard.entry((problem, n)).or_insert(table)))
    }

    pub fn problem(&self) -> ProblemKind {
        self.problem
    }

    pub fn dimension(&self) -> usize {
        self.steps.len()
    }

    /// Optimal step at fitness `f`.
    ///
    /// # Panics
    /// If `f >= n`.
    #[inline]
    pub fn step(&self, f: usize) -> usize {
        self.steps[f]
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }
}
