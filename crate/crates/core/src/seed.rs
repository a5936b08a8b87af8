//! Deterministic derivation of independent random substreams.
//!
//! A stream is a [`ChaCha8Rng`] seeded with a 64-bit value. Child seeds are
//! derived from a parent seed and an index with [`mix`], so any trial or
//! pair can be replayed without running the ones before it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed `splitmix64(parent + (index + 1)·γ)` where γ is the 64-bit
/// golden-ratio constant.
pub fn mix(parent: u64, index: u64) -> u64 {
    splitmix64(parent.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream for child `index` of `parent`.
pub fn substream(parent: u64, index: u64) -> Stream {
    stream(mix(parent, index))
}
