//! Step sizes drawn from the zero-truncated binomial distribution `Bin_{>0}(n, p)`.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};

/// Admissible mutation rates `[1/n², 1/2]` for dimension `n`.
///
/// For `n = 1` the interval would be empty; it collapses to `[1/2, 1/2]`,
/// which is harmless since the only positive step size is 1.
pub fn rate_bounds(n: usize) -> (f64, f64) {
    let n = n as f64;
    ((1.0 / (n * n)).min(0.5), 0.5)
}

// Above this mean, the inversion walk from k = 1 gets long and its starting
// mass can underflow, so sampling switches to rejection from Bin(n, p).
const INVERSION_MAX_MEAN: f64 = 32.0;

/// `Bin_{>0}(n, p)`: `P(k) = C(n,k) p^k (1-p)^(n-k) / (1 - (1-p)^n)` for `k ≥ 1`.
#[derive(Debug, Clone)]
pub struct StepSizeDistribution {
    n: usize,
    p: f64,
    ln_q: f64,
    method: Method,
}

#[derive(Debug, Clone)]
enum Method {
    /// Inverse transform over the truncated pmf, walking up from k = 1.
    Inversion { first: f64, odds: f64, mass: f64 },
    /// Draw Bin(n, p) and retry on 0; `P(0)` is below `e^-32` here.
    Rejection(Binomial),
}

impl StepSizeDistribution {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let (lo, hi) = rate_bounds(n);
        if !(lo..=hi).contains(&p) {
            return Err(Error::InvalidParameter {
                name: "p",
                reason: format!("{p} outside [{lo}, {hi}] for n = {n}"),
            });
        }
        let nf = n as f64;
        let ln_q = (-p).ln_1p();
        let method = if nf * p <= INVERSION_MAX_MEAN {
            // (1-p)^n and (1-p)^(n-1) in log space
            let mass = -(nf * ln_q).exp_m1();
            let first = nf * p * ((nf - 1.0) * ln_q).exp();
            Method::Inversion {
                first,
                odds: p / (1.0 - p),
                mass,
            }
        } else {
            Method::Rejection(
                Binomial::new(n as u64, p).map_err(|e| Error::InvalidParameter {
                    name: "p",
                    reason: e.to_string(),
                })?,
            )
        };
        Ok(StepSizeDistribution { n, p, ln_q, method })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn rate(&self) -> f64 {
        self.p
    }

    /// Probability of step size `k`.
    pub fn pmf(&self, k: usize) -> f64 {
        if k == 0 || k > self.n {
            return 0.0;
        }
        let (n, kf) = (self.n as f64, k as f64);
        let mass_ln = (-(n * self.ln_q).exp_m1()).ln();
        (ln_binomial(self.n as u64, k as u64) + kf * self.p.ln() + (n - kf) * self.ln_q - mass_ln)
            .exp()
    }

    /// Expected step size `np / (1 - (1-p)^n)`.
    pub fn mean(&self) -> f64 {
        let n = self.n as f64;
        n * self.p / -(n * self.ln_q).exp_m1()
    }

    /// Draws a step size in `1..=n`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.method {
            Method::Inversion { first, odds, mass } => {
                let target = rng.random::<f64>() * mass;
                let mut k = 1;
                let mut term = *first;
                let mut acc = term;
                while acc <= target && k < self.n {
                    term *= (self.n - k) as f64 / (k + 1) as f64 * odds;
                    k += 1;
                    acc += term;
                }
                k
            }
            Method::Rejection(bin) => loop {
                let k = bin.sample(rng);
                if k > 0 {
                    return k as usize;
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    // Independent pmf: binomial coefficient as an f64 product, powers by powi.
    fn oracle_pmf(n: usize, p: f64, k: usize) -> f64 {
        // terms by ratio recurrence; the normalizer is summed term by term
        // because 1 - (1-p)^n cancels badly
        let mut term = (1.0 - p).powi(n as i32);
        let (mut norm, mut at_k) = (0.0, 0.0);
        for j in 1..=n {
            term *= (n - j + 1) as f64 / j as f64 * p / (1.0 - p);
            norm += term;
            if j == k {
                at_k = term;
            }
        }
        at_k / norm
    }

    fn chi_square_p_value(n: usize, p: f64, draws: usize, seed: u64) -> f64 {
        let d = StepSizeDistribution::new(n, p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = vec![0u64; n + 1];
        for _ in 0..draws {
            let k = d.sample(&mut rng);
            assert!((1..=n).contains(&k));
            counts[k] += 1;
        }
        assert_eq!(counts[0], 0);
        // pool cells with expected count < 5 into one tail bin
        let (mut stat, mut bins) = (0.0, 0usize);
        let (mut pooled_obs, mut pooled_exp) = (0.0, 0.0);
        for k in 1..=n {
            let e = oracle_pmf(n, p, k) * draws as f64;
            let o = counts[k] as f64;
            if e >= 5.0 {
                stat += (o - e).powi(2) / e;
                bins += 1;
            } else {
                pooled_obs += o;
                pooled_exp += e;
            }
        }
        if pooled_exp > 0.0 {
            stat += (pooled_obs - pooled_exp).powi(2) / pooled_exp.max(1e-300);
            bins += 1;
        }
        let dof = (bins - 1).max(1) as f64;
        1.0 - ChiSquared::new(dof).unwrap().cdf(stat)
    }

    #[test]
    fn single_bit_always_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let d = StepSizeDistribution::new(1, 0.5).unwrap();
        assert_eq!(d.pmf(1), 1.0);
        for _ in 0..1000 {
            assert_eq!(d.sample(&mut rng), 1);
        }
    }

    #[test]
    fn two_bits_half_rate() {
        let d = StepSizeDistribution::new(2, 0.5).unwrap();
        assert!((d.pmf(1) - 2.0 / 3.0).abs() < 1e-15);
        assert!((d.pmf(2) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.pmf(0), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let draws = 300_000;
        let ones = (0..draws).filter(|_| d.sample(&mut rng) == 1).count() as f64;
        let sigma = (draws as f64 * 2.0 / 9.0).sqrt();
        assert!((ones - draws as f64 * 2.0 / 3.0).abs() < 4.0 * sigma);
    }

    #[test]
    fn pmf_matches_oracle() {
        for &(n, p) in &[
            (2, 0.5),
            (10, 0.1),
            (100, 0.01),
            (100, 1e-4),
            (50, 0.45),
            (300, 0.2),
        ] {
            let d = StepSizeDistribution::new(n, p).unwrap();
            let total: f64 = (1..=n).map(|k| d.pmf(k)).sum();
            assert!((total - 1.0).abs() < 1e-10, "n={n} p={p} total={total}");
            for k in 1..=n.min(40) {
                let o = oracle_pmf(n, p, k);
                if o > 1e-200 {
                    assert!((d.pmf(k) - o).abs() <= 1e-10 * o, "n={n} p={p} k={k}");
                }
            }
            let mean: f64 = (1..=n).map(|k| k as f64 * oracle_pmf(n, p, k)).sum();
            assert!((d.mean() - mean).abs() < 1e-9 * mean);
        }
    }

    #[test]
    fn inversion_matches_pmf_at_one_percent() {
        let p_value = chi_square_p_value(100, 0.01, 1_000_000, 11);
        assert!(p_value > 0.001, "p = {p_value}");
    }

    #[test]
    fn inversion_matches_pmf_near_threshold() {
        let p_value = chi_square_p_value(64, 0.49, 200_000, 12);
        assert!(p_value > 0.001, "p = {p_value}");
    }

    #[test]
    fn rejection_matches_pmf() {
        let p_value = chi_square_p_value(400, 0.3, 200_000, 13);
        assert!(p_value > 0.001, "p = {p_value}");
    }

    #[test]
    fn tiny_rate_large_dimension() {
        // p = 1/n²: (1-p)^n is close to 1, so the mass must come from expm1
        let n = 2000;
        let p = 1.0 / (n as f64 * n as f64);
        let d = StepSizeDistribution::new(n, p).unwrap();
        let (got, want) = (d.pmf(1), oracle_pmf(n, p, 1));
        // ln Γ(2001) is about 13200, so the log-space pmf carries ~1e-12 error
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        assert!(d.pmf(1) > 0.999);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!((0..10_000).all(|_| d.sample(&mut rng) >= 1));
    }

    #[test]
    fn half_rate_large_dimension_never_zero() {
        // (1/2)^2000 underflows; the sampler must still work
        let d = StepSizeDistribution::new(2000, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mean = (0..20_000).map(|_| d.sample(&mut rng) as f64).sum::<f64>() / 20_000.0;
        assert!((mean - 1000.0).abs() < 2.0, "mean = {mean}");
        assert!((d.mean() - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn validates_rate() {
        assert!(StepSizeDistribution::new(10, 0.6).is_err());
        assert!(StepSizeDistribution::new(10, 0.001).is_err());
        assert!(StepSizeDistribution::new(10, 0.01).is_ok());
        assert!(StepSizeDistribution::new(0, 0.5).is_err());
        assert!(StepSizeDistribution::new(10, f64::NAN).is_err());
        assert_eq!(rate_bounds(1), (0.5, 0.5));
        assert_eq!(rate_bounds(10), (0.01, 0.5));
    }
}
