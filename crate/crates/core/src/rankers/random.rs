//! Random scoring baseline.
//!
//! Assigns every (user, item, explanation) triple an i.i.d.-looking uniform
//! score in [0, 1), derived purely by mixing the ids with a seed. The same
//! triple always gets the same score, so ranked lists are reproducible and
//! the scorer needs no state or training.

use crate::eval::Scorer;

/// SplitMix64 finalizer; a full-avalanche 64-bit mixer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic pseudo-uniform score in [0, 1) for one triple.
pub fn score_rand(u: u32, i: u32, e: u32, seed: u64) -> f64 {
    let mut h = mix(seed);
    h = mix(h ^ u as u64);
    h = mix(h ^ ((i as u64) << 32));
    h = mix(h ^ e as u64);
    // Keep the top 53 bits: exactly the precision of an f64 mantissa.
    (h >> 11) as f64 / (1u64 << 53) as f64
}

/// The RAND baseline: uniform random relevance, fixed by `seed`.
#[derive(Debug, Clone, Copy)]
pub struct RandScorer {
    pub seed: u64,
}

impl Scorer for RandScorer {
    fn score(&self, u: u32, i: u32, e: u32) -> f64 {
        score_rand(u, i, e, self.seed)
    }
}
