//! Summary statistics and the two goodness-of-fit helpers the test suites
//! rely on.
//!
//! Evaluation counts are integers, so sums are accumulated exactly in
//! `u128`. That makes every derived statistic independent of the order in
//! which parallel workers finish.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::algorithms::Outcome;

/// Exact running moments of non-negative integers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegerMoments {
    pub count: u64,
    pub sum: u128,
    pub sum_sq: u128,
}

impl IntegerMoments {
    pub fn push(&mut self, x: u64) {
        self.count += 1;
        self.sum += u128::from(x);
        self.sum_sq += u128::from(x) * u128::from(x);
    }

    pub fn merge(&mut self, other: &IntegerMoments) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            return f64::NAN;
        }
        self.sum as f64 / self.count as f64
    }

    /// Sample variance; 0 for a single value.
    pub fn variance(&self) -> f64 {
        match self.count {
            0 => f64::NAN,
            1 => 0.0,
            k => {
                let k = u128::from(k);
                let spread = k * self.sum_sq - self.sum * self.sum;
                spread as f64 / (k * (k - 1)) as f64
            }
        }
    }

    pub fn stddev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn std_error(&self) -> f64 {
        self.stddev() / (self.count as f64).sqrt()
    }
}

/// Optimization-time statistics of a batch of runs. Mean, median, standard
/// deviation, min and max cover the completed runs only; they are NaN when
/// no run completed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub runs: u64,
    pub completed: u64,
    pub budget_exceeded: u64,
    pub mean: f64,
    pub median: f64,
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn from_outcomes(outcomes: &[Outcome]) -> Summary {
        let mut times: Vec<u64> = outcomes
            .iter()
            .filter_map(Outcome::optimization_time)
            .collect();
        times.sort_unstable();
        let mut moments = IntegerMoments::default();
        times.iter().for_each(|&t| moments.push(t));
        let median = match times.len() {
            0 => f64::NAN,
            k if k % 2 == 1 => times[k / 2] as f64,
            k => (times[k / 2 - 1] + times[k / 2]) as f64 / 2.0,
        };
        let bound = |t: Option<&u64>| t.map_or(f64::NAN, |&t| t as f64);
        Summary {
            runs: outcomes.len() as u64,
            completed: times.len() as u64,
            budget_exceeded: (outcomes.len() - times.len()) as u64,
            mean: moments.mean(),
            median,
            stddev: moments.stddev(),
            min: bound(times.first()),
            max: bound(times.last()),
        }
    }

    pub fn std_error(&self) -> f64 {
        self.stddev / (self.completed as f64).sqrt()
    }
}

/// Two-sample Kolmogorov–Smirnov statistic and asymptotic p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsTest {
    pub statistic: f64,
    pub p_value: f64,
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsTest {
    assert!(
        !a.is_empty() && !b.is_empty(),
        "KS test needs two non-empty samples"
    );
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        // step over a whole block of tied values before comparing the CDFs
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    let lambda = (ne + 0.12 + 0.11 / ne) * d;
    KsTest {
        statistic: d,
        p_value: kolmogorov_survival(lambda),
    }
}

// Q(λ) = 2 Σ (-1)^(k-1) exp(-2 k² λ²)
fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=200 {
        let term = sign * (-2.0 * (k as f64 * lambda).powi(2)).exp();
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Chi-square goodness-of-fit result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Goodness of fit of `observed` counts to category probabilities `probs`.
/// Categories with expected count below 5 are pooled into one bin.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> ChiSquareTest {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let total = total as f64;
    let (mut stat, mut bins) = (0.0, 0usize);
    let (mut pooled_obs, mut pooled_exp) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        let e = p * total;
        if e >= 5.0 {
            stat += (o as f64 - e).powi(2) / e;
            bins += 1;
        } else {
            pooled_obs += o as f64;
            pooled_exp += e;
        }
    }
    if pooled_exp > 0.0 || pooled_obs > 0.0 {
        stat += (pooled_obs - pooled_exp).powi(2) / pooled_exp.max(f64::MIN_POSITIVE);
        bins += 1;
    }
    let dof = bins.saturating_sub(1).max(1);
    ChiSquareTest {
        statistic: stat,
        dof,
        p_value: 1.0 - ChiSquared::new(dof as f64).unwrap().cdf(stat),
    }
}
