//! Seeded Monte Carlo runs.
//!
//! Every trial draws from its own ChaCha8 stream whose seed is a SplitMix64
//! fold of the master seed and the trial's coordinates. Results come back in
//! trial order, so the outcome never depends on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the stream at `coords` (e.g. `[sweep_point, trial]`).
pub fn derive_seed(master_seed: u64, coords: &[u64]) -> u64 {
    coords.iter().fold(splitmix64(master_seed), |acc, &c| {
        splitmix64(acc ^ splitmix64(c))
    })
}

pub fn trial_rng(master_seed: u64, coords: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master_seed, coords))
}

/// Runs `trial(index, rng)` for `0..trials`, with the stream for trial `i`
/// derived from `(master_seed, prefix…, i)`. Results are in trial order.
pub fn monte_carlo<T, F>(
    trials: usize,
    master_seed: u64,
    prefix: &[u64],
    trial: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> Result<T> + Sync,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut coords = prefix.to_vec();
            coords.push(i as u64);
            trial(i, &mut trial_rng(master_seed, &coords))
        })
        .collect()
}
