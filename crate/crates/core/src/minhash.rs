//! Shingle sets and MinHash signatures.
//!
//! A sentence becomes a set of word n-grams (shingles); the set becomes a
//! fixed-length signature whose per-position collision rate between two
//! sentences estimates their true Jaccard similarity. The hash family is one
//! base 64-bit hash of the shingle bytes combined with `k` pairwise
//! independent affine transforms `a_j·x + b_j mod P` over the Mersenne prime
//! `P = 2^61 − 1`, so signatures are cheap, seedable, and deterministic.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::text::tokenize;

/// Modulus of the affine hash family. All real hash values are `< P`, so
/// [`EMPTY_SENTINEL`] can never collide with one.
const MERSENNE_PRIME: u64 = (1 << 61) - 1;

/// Signature value for every position when the shingle set is empty.
pub const EMPTY_SENTINEL: u64 = u64::MAX;

/// Smallest permutation count with usefully low estimator variance.
const MIN_PERMUTATIONS: usize = 16;

/// A set of word n-grams, each an ordered tuple of lowercase tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShingleSet {
    shingles: HashSet<Vec<String>>,
}

impl ShingleSet {
    pub fn len(&self) -> usize {
        self.shingles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shingles.is_empty()
    }

    pub fn contains(&self, shingle: &[String]) -> bool {
        self.shingles.contains(shingle)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<String>> {
        self.shingles.iter()
    }

    /// Exact Jaccard similarity `|A∩B| / |A∪B|`. Two empty sets are treated
    /// as identical (1.0), matching what their all-sentinel signatures
    /// estimate.
    pub fn exact_jaccard(&self, other: &ShingleSet) -> f64 {
        if self.is_empty() && other.is_empty() {
            return 1.0;
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let inter = small
            .shingles
            .iter()
            .filter(|s| large.shingles.contains(*s))
            .count();
        let union = self.len() + other.len() - inter;
        inter as f64 / union as f64
    }
}

impl FromIterator<Vec<String>> for ShingleSet {
    fn from_iter<I: IntoIterator<Item = Vec<String>>>(iter: I) -> Self {
        ShingleSet {
            shingles: iter.into_iter().collect(),
        }
    }
}

/// All consecutive n-token windows of the sentence after lowercasing and
/// punctuation-stripping tokenization. A sentence with fewer than `n` tokens
/// (but at least one) yields a single shingle holding all its tokens; an
/// empty sentence yields an empty set.
pub fn shingles(sentence_text: &str, n: usize) -> ShingleSet {
    assert!(n >= 1, "shingle size must be at least 1");
    let tokens = tokenize(sentence_text);
    if tokens.is_empty() {
        return ShingleSet::default();
    }
    if tokens.len() < n {
        return std::iter::once(tokens).collect();
    }
    tokens.windows(n).map(|w| w.to_vec()).collect()
}

/// MinHash signature of one shingle set: `mins[j]` is the minimum of the
/// j-th hash over all shingles. Comparable only across equal `(k, seed)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinHashSignature {
    pub seed: u64,
    pub mins: Vec<u64>,
}

impl MinHashSignature {
    pub fn num_perm(&self) -> usize {
        self.mins.len()
    }
}

/// Reusable hash family for a fixed `(k, seed)`; build once, sign many
/// sentences.
#[derive(Debug, Clone)]
pub struct MinHasher {
    seed: u64,
    /// `(a_j, b_j)` coefficients of the affine transforms.
    params: Vec<(u64, u64)>,
}

impl MinHasher {
    /// Draw the `k` affine transforms from a ChaCha stream seeded by `seed`.
    pub fn new(num_perm: usize, seed: u64) -> Result<Self> {
        if num_perm < MIN_PERMUTATIONS {
            return Err(Error::InvalidConfig(format!(
                "num_perm must be at least {MIN_PERMUTATIONS}, got {num_perm}"
            )));
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let params = (0..num_perm)
            .map(|_| {
                let a = rng.gen_range(1..MERSENNE_PRIME);
                let b = rng.gen_range(0..MERSENNE_PRIME);
                (a, b)
            })
            .collect();
        Ok(MinHasher { seed, params })
    }

    pub fn num_perm(&self) -> usize {
        self.params.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Sign one shingle set. An empty set yields the all-sentinel signature.
    pub fn signature(&self, set: &ShingleSet) -> MinHashSignature {
        let mut mins = vec![EMPTY_SENTINEL; self.params.len()];
        for shingle in set.iter() {
            let base = shingle_hash(shingle);
            for (j, &(a, b)) in self.params.iter().enumerate() {
                let h = ((a as u128 * base as u128 + b as u128) % MERSENNE_PRIME as u128) as u64;
                if h < mins[j] {
                    mins[j] = h;
                }
            }
        }
        MinHashSignature {
            seed: self.seed,
            mins,
        }
    }
}

/// One-shot convenience over [`MinHasher`].
pub fn minhash(shingle_set: &ShingleSet, num_perm: usize, seed: u64) -> Result<MinHashSignature> {
    Ok(MinHasher::new(num_perm, seed)?.signature(shingle_set))
}

/// Base 64-bit FNV-1a hash of the shingle's tokens, separated by a byte that
/// cannot appear inside a token so ("ab","c") and ("a","bc") differ.
fn shingle_hash(shingle: &[String]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for token in shingle {
        for &byte in token.as_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(PRIME);
        }
        h ^= 0x1f;
        h = h.wrapping_mul(PRIME);
    }
    h
}

/// Fraction of positions where the two signatures agree — an unbiased
/// estimate of the true Jaccard similarity of the underlying sets.
pub fn estimate_jaccard(a: &MinHashSignature, b: &MinHashSignature) -> Result<f64> {
    if a.seed != b.seed {
        return Err(Error::IncompatibleSignature(format!(
            "seed mismatch: {} vs {}",
            a.seed, b.seed
        )));
    }
    if a.mins.len() != b.mins.len() {
        return Err(Error::IncompatibleSignature(format!(
            "length mismatch: {} vs {}",
            a.mins.len(),
            b.mins.len()
        )));
    }
    let equal = a.mins.iter().zip(&b.mins).filter(|(x, y)| x == y).count();
    Ok(equal as f64 / a.mins.len() as f64)
}

/// Probability that two sets with Jaccard similarity `s` collide in at least
/// one band of `b` bands × `r` rows: the LSH S-curve `1 − (1 − s^r)^b`.
pub fn collision_probability(s: f64, num_bands: usize, rows_per_band: usize) -> f64 {
    1.0 - (1.0 - s.powi(rows_per_band as i32)).powi(num_bands as i32)
}

/// Weights of the two banding error masses. False negatives are weighted
/// heavier than false positives because the two failure modes are not
/// symmetric: a pair that never collides in any band is lost for good,
/// while a spurious collision is still screened out by the
/// estimated-Jaccard verification in `query` and costs only time.
const FALSE_POSITIVE_WEIGHT: f64 = 0.3;
const FALSE_NEGATIVE_WEIGHT: f64 = 0.7;

/// Pick the banding `(b, r)` with `b·r = k` that minimizes the weighted
/// false-positive mass below `t` plus false-negative mass above `t` under
/// the S-curve, integrated numerically.
pub fn band_params(t: f64, num_perm: usize) -> Result<(usize, usize)> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "threshold must lie strictly between 0 and 1, got {t}"
        )));
    }
    if num_perm < MIN_PERMUTATIONS {
        return Err(Error::InvalidConfig(format!(
            "num_perm must be at least {MIN_PERMUTATIONS}, got {num_perm}"
        )));
    }
    let mut best: Option<((usize, usize), f64)> = None;
    for b in 1..=num_perm {
        if num_perm % b != 0 {
            continue;
        }
        let r = num_perm / b;
        let fp = integrate(|s| collision_probability(s, b, r), 0.0, t);
        let fn_ = integrate(|s| 1.0 - collision_probability(s, b, r), t, 1.0);
        let cost = FALSE_POSITIVE_WEIGHT * fp + FALSE_NEGATIVE_WEIGHT * fn_;
        if best.map_or(true, |(_, c)| cost < c) {
            best = Some(((b, r), cost));
        }
    }
    best.map(|(br, _)| br)
        .ok_or(Error::NoBandFactorization { num_perm })
}

/// Midpoint-rule integral of `f` over `[lo, hi]`.
fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    const STEPS: usize = 1000;
    let width = (hi - lo) / STEPS as f64;
    (0..STEPS)
        .map(|i| f(lo + (i as f64 + 0.5) * width) * width)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn bigrams_of_a_short_review() {
        let set = shingles("the food is good", 2);
        assert_eq!(set.len(), 3);
        for pair in [["the", "food"], ["food", "is"], ["is", "good"]] {
            assert!(set.contains(&tuple(&pair)));
        }
    }

    #[test]
    fn bigrams_preserve_negation() {
        let a = shingles("is good", 2);
        let b = shingles("not good", 2);
        assert!(a.contains(&tuple(&["is", "good"])));
        assert!(b.contains(&tuple(&["not", "good"])));
        assert_eq!(a.exact_jaccard(&b), 0.0);
    }

    #[test]
    fn short_sentence_falls_back_to_whole_token_list() {
        let set = shingles("good", 2);
        assert_eq!(set.len(), 1);
        assert!(set.contains(&tuple(&["good"])));
    }

    #[test]
    fn shingling_normalizes_case_and_punctuation() {
        assert_eq!(
            shingles("The food, is GOOD!", 2),
            shingles("the food is good", 2)
        );
        assert!(shingles("", 2).is_empty());
        assert!(shingles("...", 2).is_empty());
    }

    #[test]
    fn exact_jaccard_reference_points() {
        let a = shingles("the food is good", 2);
        assert_eq!(a.exact_jaccard(&a), 1.0);
        assert_eq!(
            ShingleSet::default().exact_jaccard(&ShingleSet::default()),
            1.0
        );
        assert_eq!(a.exact_jaccard(&ShingleSet::default()), 0.0);
        // {ab,bc,cd} vs {bc,cd,ef}: intersection 2, union 4.
        let x: ShingleSet = [["a", "b"], ["b", "c"], ["c", "d"]]
            .iter()
            .map(|p| tuple(p))
            .collect();
        let y: ShingleSet = [["b", "c"], ["c", "d"], ["e", "f"]]
            .iter()
            .map(|p| tuple(p))
            .collect();
        assert_eq!(x.exact_jaccard(&y), 0.5);
    }

    #[test]
    fn signatures_are_deterministic_per_seed() {
        let set = shingles("the food is good and the service is great", 2);
        let s1 = minhash(&set, 128, 1).unwrap();
        let s2 = minhash(&set, 128, 1).unwrap();
        let s3 = minhash(&set, 128, 2).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1.num_perm(), 128);
        assert_ne!(s1.mins, s3.mins);
    }

    #[test]
    fn empty_set_signs_as_all_sentinels() {
        let sig = minhash(&ShingleSet::default(), 16, 7).unwrap();
        assert!(sig.mins.iter().all(|&m| m == EMPTY_SENTINEL));
        // Real hash values live below 2^61 and can never equal the sentinel.
        let sig2 = minhash(&shingles("good food", 2), 16, 7).unwrap();
        assert!(sig2.mins.iter().all(|&m| m < (1 << 61)));
    }

    #[test]
    fn too_few_permutations_is_a_config_error() {
        assert!(minhash(&shingles("good food", 2), 8, 0).is_err());
        assert!(band_params(0.9, 8).is_err());
    }

    #[test]
    fn estimate_matches_identity_and_rejects_mismatches() {
        let set = shingles("the food is good", 2);
        let a = minhash(&set, 128, 1).unwrap();
        assert_eq!(estimate_jaccard(&a, &a).unwrap(), 1.0);

        let other_seed = minhash(&set, 128, 2).unwrap();
        assert!(matches!(
            estimate_jaccard(&a, &other_seed),
            Err(Error::IncompatibleSignature(_))
        ));
        let other_k = minhash(&set, 64, 1).unwrap();
        assert!(matches!(
            estimate_jaccard(&a, &other_k),
            Err(Error::IncompatibleSignature(_))
        ));
    }

    #[test]
    fn disjoint_sets_estimate_near_zero() {
        let a: ShingleSet = (0..200).map(|i| tuple(&[&format!("a{i}"), "x"])).collect();
        let b: ShingleSet = (0..200).map(|i| tuple(&[&format!("b{i}"), "x"])).collect();
        let sa = minhash(&a, 128, 3).unwrap();
        let sb = minhash(&b, 128, 3).unwrap();
        assert!(estimate_jaccard(&sa, &sb).unwrap() <= 0.05);
    }

    #[test]
    fn estimate_tracks_a_known_half_similarity() {
        // 30-vs-30 element sets sharing 20: Jaccard 20/40 = 0.5.
        let a: ShingleSet = (0..30).map(|i| tuple(&[&format!("w{i}")])).collect();
        let b: ShingleSet = (10..50)
            .take(30)
            .map(|i| tuple(&[&format!("w{i}")]))
            .collect();
        assert_eq!(a.exact_jaccard(&b), 0.5);
        let est = estimate_jaccard(
            &minhash(&a, 128, 11).unwrap(),
            &minhash(&b, 128, 11).unwrap(),
        )
        .unwrap();
        assert!((est - 0.5).abs() <= 0.15, "estimate {est} too far from 0.5");
    }

    #[test]
    fn band_choice_multiplies_back_and_crosses_near_threshold() {
        let (b, r) = band_params(0.9, 128).unwrap();
        assert_eq!(b * r, 128);
        // Bisect for the similarity where the S-curve crosses 1/2.
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if collision_probability(mid, b, r) < 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let crossing = 0.5 * (lo + hi);
        assert!(
            (crossing - 0.9).abs() < 0.1,
            "crossing {crossing} not near 0.9 for b={b} r={r}"
        );
    }

    #[test]
    fn band_choice_separates_near_duplicates_from_half_overlaps() {
        // The banding picked for the t = 0.9 operating point must make
        // candidate generation sharp: analytically, a pair at similarity
        // 0.95 should collide in some band almost surely, a pair at 0.5
        // almost never.
        let (b, r) = band_params(0.9, 128).unwrap();
        assert!(
            collision_probability(0.95, b, r) >= 0.95,
            "b={b} r={r} loses near-duplicates"
        );
        assert!(
            collision_probability(0.5, b, r) <= 0.05,
            "b={b} r={r} floods candidates"
        );
    }

    #[test]
    fn lower_thresholds_pick_shorter_bands() {
        let (_, r_high) = band_params(0.9, 128).unwrap();
        let (_, r_low) = band_params(0.5, 128).unwrap();
        assert!(
            r_low < r_high,
            "r at t=0.5 ({r_low}) should be below r at t=0.9 ({r_high})"
        );
    }

    #[test]
    fn band_params_rejects_degenerate_thresholds() {
        assert!(band_params(0.0, 128).is_err());
        assert!(band_params(1.0, 128).is_err());
    }
}
