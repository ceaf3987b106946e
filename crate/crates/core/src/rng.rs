//! Reproducible per-run random streams.
//!
//! Every run owns a ChaCha8 stream whose seed is a hash of
//! `(master_seed, cell, run, purpose)`, so results do not depend on which
//! worker executed a run or in which order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for all runs.
pub type RunRng = ChaCha8Rng;

/// What a stream is used for; distinct purposes of one run never overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    /// Hidden instance data (target string, position order).
    Instance = 1,
    /// The algorithm's own randomness.
    Algorithm = 2,
}

/// Coordinates of one run inside an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct StreamKey {
    pub master_seed: u64,
    /// Grid cell `(a_index, b_index)`; `(0, 0)` outside grid searches.
    pub cell: (u32, u32),
    pub run: u64,
}

impl StreamKey {
    pub fn new(master_seed: u64, cell: (u32, u32), run: u64) -> Self {
        StreamKey {
            master_seed,
            cell,
            run,
        }
    }

    pub fn rng(&self, purpose: Purpose) -> RunRng {
        let mut state = mix64(self.master_seed);
        for word in [
            u64::from(self.cell.0),
            u64::from(self.cell.1),
            self.run,
            purpose as u64,
        ] {
            state = mix64(state ^ mix64(word.wrapping_add(GOLDEN)));
        }
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            state = state.wrapping_add(GOLDEN);
            chunk.copy_from_slice(&mix64(state).to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
