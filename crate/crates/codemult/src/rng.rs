//! Portable deterministic randomness shared by [`crate::corpus`] and
//! [`crate::testkit`].
//!
//! The generator is pinned so that seeded outputs are reproducible across
//! platforms and releases: a 64-bit seed is expanded to a 256-bit ChaCha8 key
//! with SplitMix64, and integer ranges are drawn by rejection sampling on the
//! raw ChaCha8 word stream. None of this depends on `rand`'s distribution
//! code, whose exact output is not stable across major versions.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 step (public-domain constants from Vigna's reference code).
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// ChaCha8 keyed by SplitMix64 expansion of `seed`.
pub(crate) fn chacha8(seed: u64) -> ChaCha8Rng {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Uniform draw from `0..n` by rejection on `next_u64`; `n` must be nonzero.
pub(crate) fn uniform_u64(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    debug_assert!(n > 0);
    // Reject the tail of the u64 range that would bias the modulus.
    let zone = u64::MAX - u64::MAX % n;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % n;
        }
    }
}

/// Uniform f64 in [0, 1) from the top 53 bits of one u64 draw.
pub(crate) fn uniform_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
