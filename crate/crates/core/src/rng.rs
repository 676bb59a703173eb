//! Seeded randomness.
//!
//! Every stochastic operation in this crate draws from an explicitly seeded
//! [`ChaCha8Rng`]; there is no global generator. Sub-seeds are derived with
//! splitmix64 so that independent stages (data synthesis, weight init,
//! shuffling) get decorrelated streams from one master seed, and so grid
//! cells produce identical results regardless of execution order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The crate-wide seeded generator.
pub type SeededRng = ChaCha8Rng;

/// Builds a generator from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One splitmix64 step (Steele, Lea, Flood 2014). Used for seed derivation,
/// not as a general-purpose generator.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Derives a sub-seed from a master seed and a stream index.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(master ^ splitmix64(stream))
}

/// Derives a seed from a master seed and a canonical key string.
///
/// The key is folded with FNV-1a and mixed through splitmix64, so the result
/// depends on every byte of the key and is stable across runs and platforms.
pub fn derive_seed_from_key(master: u64, key: &str) -> u64 {
    const FNV_OFFSET: u64 = 0xCBF2_9CE4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01B3;
    let mut h = FNV_OFFSET;
    for &b in key.as_bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    splitmix64(master ^ h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_seed_same_stream() {
        let mut a = rng_from_seed(42);
        let mut b = rng_from_seed(42);
        let xs: Vec<f64> = (0..16).map(|_| a.random()).collect();
        let ys: Vec<f64> = (0..16).map(|_| b.random()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn derived_streams_differ() {
        assert_ne!(derive_seed(7, 0), derive_seed(7, 1));
        assert_ne!(derive_seed(7, 0), derive_seed(8, 0));
    }

    #[test]
    fn key_derivation_is_stable_and_sensitive() {
        let a = derive_seed_from_key(1, "fid=2|w=100");
        assert_eq!(a, derive_seed_from_key(1, "fid=2|w=100"));
        assert_ne!(a, derive_seed_from_key(1, "fid=2|w=101"));
        assert_ne!(a, derive_seed_from_key(2, "fid=2|w=100"));
    }
}
