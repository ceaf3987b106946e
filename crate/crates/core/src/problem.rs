//! OneMax and LeadingOnes with hidden target string and position order.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    OneMax,
    LeadingOnes,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::OneMax => "onemax",
            ProblemKind::LeadingOnes => "leadingones",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "onemax" | "om" => Ok(ProblemKind::OneMax),
            "leadingones" | "lo" => Ok(ProblemKind::LeadingOnes),
            other => Err(Error::InvalidInput(format!("unknown problem {other:?}"))),
        }
    }
}

/// A benchmark function with hidden instance data and an evaluation counter.
///
/// `OneMax_z(x)` counts the positions where `x` agrees with `z`;
/// `LeadingOnes_{z,σ}(x)` is the length of the longest common prefix of `x`
/// and `z` when positions are read in the order `σ(0), σ(1), …`. The target
/// and the order are private: algorithms only see fitness values.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    kind: ProblemKind,
    target: BitString,
    order: Vec<usize>,
    // target bits laid out in `order`, so the prefix scan touches one array
    ordered_target: Vec<bool>,
    identity_order: bool,
    evaluations: u64,
}

impl ProblemInstance {
    pub fn onemax(target: BitString) -> Self {
        let n = target.len();
        Self::build(ProblemKind::OneMax, target, (0..n).collect())
    }

    /// LeadingOnes with target `target` and position order `order`, which
    /// must be a permutation of `0..n`.
    pub fn leading_ones(target: BitString, order: Vec<usize>) -> Result<Self> {
        let n = target.len();
        if order.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: order.len(),
            });
        }
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInput(
                    "position order is not a permutation".into(),
                ));
            }
        }
        Ok(Self::build(ProblemKind::LeadingOnes, target, order))
    }

    /// The textbook instance: target all ones, identity order.
    pub fn standard(kind: ProblemKind, n: usize) -> Result<Self> {
        let target = BitString::ones(n)?;
        Ok(Self::build(kind, target, (0..n).collect()))
    }

    /// Uniformly random target (and order, for LeadingOnes).
    pub fn random<R: Rng + ?Sized>(kind: ProblemKind, n: usize, rng: &mut R) -> Result<Self> {
        let target = BitString::random(n, rng)?;
        let mut order: Vec<usize> = (0..n).collect();
        if kind == ProblemKind::LeadingOnes {
            order.shuffle(rng);
        }
        Ok(Self::build(kind, target, order))
    }

    fn build(kind: ProblemKind, target: BitString, order: Vec<usize>) -> Self {
        let ordered_target = order.iter().map(|&i| target.get(i)).collect();
        let identity_order = order.iter().enumerate().all(|(k, &i)| k == i);
        ProblemInstance {
            kind,
            target,
            order,
            ordered_target,
            identity_order,
            evaluations: 0,
        }
    }

    #[inline]
    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    /// Problem dimension `n`; also the optimal fitness.
    #[inline]
    pub fn dimension(&self) -> usize {
        self.target.len()
    }

    /// Number of `evaluate` calls so far.
    #[inline]
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Fitness of `x`. Every call counts as one evaluation.
    pub fn evaluate(&mut self, x: &BitString) -> Result<usize> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: x.len(),
            });
        }
        self.evaluations += 1;
        Ok(match self.kind {
            ProblemKind::OneMax => self.onemax_value(x),
            ProblemKind::LeadingOnes => self.leading_ones_value(x),
        })
    }

    fn onemax_value(&self, x: &BitString) -> usize {
        let wrong: usize = x
            .words()
            .iter()
            .zip(self.target.words())
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum();
        self.dimension() - wrong
    }

    fn leading_ones_value(&self, x: &BitString) -> usize {
        if self.identity_order {
            let n = self.dimension();
            for (k, (a, b)) in x.words().iter().zip(self.target.words()).enumerate() {
                let diff = a ^ b;
                if diff != 0 {
                    return (k * 64 + diff.trailing_zeros() as usize).min(n);
                }
            }
            return n;
        }
        self.order
            .iter()
            .zip(&self.ordered_target)
            .position(|(&i, &t)| x.get(i) != t)
            .unwrap_or(self.dimension())
    }
}
