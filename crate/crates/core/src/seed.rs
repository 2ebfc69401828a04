//! Seed derivation. Every random stream in the crate is a `ChaCha8Rng`
//! seeded from a `u64`, and sub-streams are derived with splitmix64 so
//! that repeat `i` of a run sees the same stream whatever the repeat count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One splitmix64 step applied to `seed + stream * golden`.
pub fn derive(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_differ() {
        assert_ne!(derive(1, 0), derive(1, 1));
        assert_ne!(derive(1, 0), derive(2, 0));
        assert_eq!(derive(5, 3), derive(5, 3));
    }
}
