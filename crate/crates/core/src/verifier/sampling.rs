//! Deterministic subset sampling.
//!
//! Trials are grouped into fixed batches of [`BATCH_SIZE`]. Batch `i` draws
//! from a ChaCha8 stream seeded with
//! `splitmix64(master_seed ^ splitmix64(i))`, so the subsets drawn depend
//! only on the master seed and never on how batches are scheduled.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::SubsetMask;

pub const BATCH_SIZE: u64 = 256;

/// Number of non-divisor sizes mixed into the size pool.
pub const NON_DIVISOR_SIZES: usize = 3;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

pub fn batch_rng(master_seed: u64, batch: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(master_seed ^ splitmix64(batch)))
}

/// Every divisor of `n`, then `NON_DIVISOR_SIZES` distinct non-divisors in
/// `1..n` drawn from the master seed (fewer if `n` has fewer).
pub fn size_pool(n: usize, master_seed: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    let mut others: Vec<usize> = (1..n).filter(|d| n % d != 0).collect();
    let mut rng = batch_rng(master_seed, u64::MAX);
    let take = NON_DIVISOR_SIZES.min(others.len());
    for i in 0..take {
        let j = rng.gen_range(i..others.len());
        others.swap(i, j);
    }
    let mut extra = others[..take].to_vec();
    extra.sort_unstable();
    pool.extend(extra);
    pool
}

/// Subsets for batch `batch` of a run with `trials` total trials.
pub fn batch_subsets(
    n: usize,
    master_seed: u64,
    batch: u64,
    trials: u64,
    pool: &[usize],
) -> Vec<SubsetMask> {
    let start = batch * BATCH_SIZE;
    let count = trials.saturating_sub(start).min(BATCH_SIZE);
    let mut rng = batch_rng(master_seed, batch);
    (0..count)
        .map(|_| {
            let size = pool[rng.gen_range(0..pool.len())];
            SubsetMask::from_indices(n, sample(&mut rng, n, size))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_contents() {
        let pool = size_pool(50, 1);
        assert_eq!(&pool[..6], &[1, 2, 5, 10, 25, 50]);
        assert_eq!(pool.len(), 9);
        assert!(pool[6..].iter().all(|d| 50 % d != 0));
        assert_eq!(size_pool(50, 1), pool);
    }

    #[test]
    fn batches_are_reproducible() {
        let pool = size_pool(18, 9);
        let a = batch_subsets(18, 9, 3, 10_000, &pool);
        let b = batch_subsets(18, 9, 3, 10_000, &pool);
        assert_eq!(a, b);
        assert_eq!(a.len(), BATCH_SIZE as usize);
        assert!(a.iter().all(|s| pool.contains(&s.len())));
        assert_ne!(a, batch_subsets(18, 9, 4, 10_000, &pool));
        assert_eq!(batch_subsets(18, 9, 1, 300, &pool).len(), 44);
        assert!(batch_subsets(18, 9, 2, 300, &pool).is_empty());
    }
}
