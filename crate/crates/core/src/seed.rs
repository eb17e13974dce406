//! Labeled sub-seed derivation.
//!
//! Every component draws its randomness from a seed derived from the run
//! seed plus a label and indices, so that results never depend on the order
//! in which independent work items are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a sub-seed from `seed`, a component label and a list of indices.
///
/// Stable across platforms and toolchains.
pub fn derive(seed: u64, label: &str, indices: &[u64]) -> u64 {
    let mut h = splitmix64(seed);
    for chunk in label.as_bytes().chunks(8) {
        let mut word = [0u8; 8];
        word[..chunk.len()].copy_from_slice(chunk);
        h = splitmix64(h ^ u64::from_le_bytes(word));
    }
    h = splitmix64(h ^ label.len() as u64);
    for &i in indices {
        h = splitmix64(h ^ i);
    }
    h
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rng_for(seed: u64, label: &str, indices: &[u64]) -> Rng {
    rng(derive(seed, label, indices))
}
