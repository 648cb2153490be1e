//! Seeded randomness.
//!
//! Every stochastic routine in the crate takes an explicit 64-bit seed and
//! expands it into a ChaCha8 stream (a counter-based generator), so a report
//! that records its seeds can be replayed bit-exactly by the same binary.
//! There is no global RNG state anywhere in the crate.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The crate-wide RNG type.
pub type CsdRng = ChaCha8Rng;

/// Build the stream for a root seed.
pub fn rng_from_seed(seed: u64) -> CsdRng {
    // seed_from_u64 runs the u64 through SplitMix64 key expansion.
    CsdRng::seed_from_u64(seed)
}

/// Derive the seed of an independent child stream.
///
/// Parallel replicates use `split_seed(root, replicate_index)`; the SplitMix64
/// finalizer decorrelates nearby indices. Documented so that externally
/// recorded (root, index) pairs identify the exact stream.
pub fn split_seed(root: u64, index: u64) -> u64 {
    let mut z = root ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_seed_same_stream() {
        let mut a = rng_from_seed(42);
        let mut b = rng_from_seed(42);
        for _ in 0..100 {
            assert_eq!(a.random::<u64>(), b.random::<u64>());
        }
    }

    #[test]
    fn split_seeds_differ() {
        let s: Vec<u64> = (0..64).map(|i| split_seed(7, i)).collect();
        let mut dedup = s.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), s.len());
    }
}
