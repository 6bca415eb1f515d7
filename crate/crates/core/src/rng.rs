//! Seeded RNG streams.
//!
//! All randomness in the crate flows from a single `u64` seed through named
//! sub-streams, so that changing the consumption pattern of one component
//! (data generation, parameter init, batch shuffling) never perturbs another.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stable 64-bit FNV-1a hash. Used to derive stream ids from labels and to
/// map tokens to vocabulary ids; must never change across releases.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// A deterministic RNG for the given seed and stream label.
pub fn stream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a64(label.as_bytes()));
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible() {
        let a: f64 = stream(7, "init").gen();
        let b: f64 = stream(7, "init").gen();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn labels_separate_streams() {
        let a: f64 = stream(7, "init").gen();
        let b: f64 = stream(7, "data").gen();
        assert_ne!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn fnv_is_stable() {
        // Frozen reference values; a change here breaks every stored tokenizer id.
        assert_eq!(fnv1a64(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a64(b"a"), 0xaf63_dc4c_8601_ec8c);
    }
}
