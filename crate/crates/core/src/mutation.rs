//! The `mut_ℓ` operator: flip exactly ℓ distinct, uniformly chosen positions.

use rand::Rng;

use crate::bitstring::BitString;
use crate::error::{Error, Result};

/// Draws uniformly random sets of distinct positions in `0..n`.
///
/// Keeps a permutation of all positions between calls and runs a partial
/// Fisher–Yates shuffle on it. That yields a uniform subset whatever order
/// the permutation is left in, so no reset is needed and a draw costs
/// `O(min(ℓ, n - ℓ))` random numbers.
#[derive(Debug, Clone)]
pub struct FlipSampler {
    positions: Vec<usize>,
}

impl FlipSampler {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(FlipSampler {
            positions: (0..n).collect(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.positions.len()
    }

    /// Returns `ell` distinct positions, uniform over all `C(n, ell)` subsets.
    pub fn sample<R: Rng + ?Sized>(&mut self, ell: usize, rng: &mut R) -> Result<&[usize]> {
        let n = self.positions.len();
        if ell == 0 || ell > n {
            return Err(Error::InvalidStep { ell, n });
        }
        if 2 * ell <= n {
            self.shuffle_prefix(ell, rng);
            Ok(&self.positions[..ell])
        } else {
            // choose the n - ell positions to keep; flip the rest
            let keep = n - ell;
            self.shuffle_prefix(keep, rng);
            Ok(&self.positions[keep..])
        }
    }

    fn shuffle_prefix<R: Rng + ?Sized>(&mut self, len: usize, rng: &mut R) {
        let n = self.positions.len();
        for j in 0..len {
            let k = rng.random_range(j..n);
            self.positions.swap(j, k);
        }
    }
}

/// Copy of `x` with exactly `ell` uniformly chosen distinct bits flipped.
pub fn mutate<R: Rng + ?Sized>(x: &BitString, ell: usize, rng: &mut R) -> Result<BitString> {
    let mut sampler = FlipSampler::new(x.len())?;
    let mut y = x.clone();
    y.flip_all(sampler.sample(ell, rng)?);
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn full_flip_is_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = BitString::random(37, &mut rng).unwrap();
        assert_eq!(mutate(&x, 37, &mut rng).unwrap(), x.complement());
        let one: BitString = "0".parse().unwrap();
        assert_eq!(mutate(&one, 1, &mut rng).unwrap().to_string(), "1");
    }

    #[test]
    fn rejects_out_of_range_steps() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = BitString::zeros(5).unwrap();
        assert_eq!(
            mutate(&x, 0, &mut rng),
            Err(Error::InvalidStep { ell: 0, n: 5 })
        );
        assert_eq!(
            mutate(&x, 6, &mut rng),
            Err(Error::InvalidStep { ell: 6, n: 5 })
        );
    }

    #[test]
    fn positions_flip_with_frequency_ell_over_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 20;
        let draws = 50_000u32;
        for ell in [1, 3, 10, 17] {
            let mut sampler = FlipSampler::new(n).unwrap();
            let mut counts = vec![0u32; n];
            for _ in 0..draws {
                for &i in sampler.sample(ell, &mut rng).unwrap() {
                    counts[i] += 1;
                }
            }
            let q = ell as f64 / n as f64;
            let sigma = (f64::from(draws) * q * (1.0 - q)).sqrt();
            for &c in &counts {
                let dev = (f64::from(c) - f64::from(draws) * q).abs();
                assert!(dev < 4.5 * sigma, "ell={ell} count={c}");
            }
        }
    }

    #[test]
    fn subsets_are_uniform() {
        // all C(5, 2) = 10 pairs equally likely
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut sampler = FlipSampler::new(5).unwrap();
        let mut counts = std::collections::HashMap::new();
        let draws = 100_000;
        for _ in 0..draws {
            let mut s = sampler.sample(2, &mut rng).unwrap().to_vec();
            s.sort_unstable();
            *counts.entry(s).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 10);
        for &c in counts.values() {
            assert!((f64::from(c) - 10_000.0).abs() < 400.0, "{counts:?}");
        }
    }

    proptest! {
        #[test]
        fn hamming_distance_equals_ell(n in 1usize..300, seed: u64, frac in 0.0f64..1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ell = 1 + ((n - 1) as f64 * frac) as usize;
            let x = BitString::random(n, &mut rng).unwrap();
            let before = x.clone();
            let y = mutate(&x, ell, &mut rng).unwrap();
            prop_assert_eq!(&x, &before);
            prop_assert_eq!(x.hamming_distance(&y).unwrap(), ell);
        }

        #[test]
        fn sample_positions_are_distinct(n in 1usize..200, seed: u64, frac in 0.0f64..1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ell = 1 + ((n - 1) as f64 * frac) as usize;
            let mut sampler = FlipSampler::new(n).unwrap();
            for _ in 0..3 {
                let mut picked = sampler.sample(ell, &mut rng).unwrap().to_vec();
                prop_assert_eq!(picked.len(), ell);
                picked.sort_unstable();
                picked.dedup();
                prop_assert_eq!(picked.len(), ell);
                prop_assert!(picked.iter().all(|&i| i < n));
            }
        }
    }
}
