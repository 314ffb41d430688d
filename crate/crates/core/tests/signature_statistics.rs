//! Monte-Carlo checks of the MinHash estimator: over many random set pairs
//! of known Jaccard similarity, the signature estimate must be unbiased and
//! its spread must match the binomial noise floor sqrt(J(1−J)/k).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use exprank::minhash::{MinHasher, ShingleSet};

const NUM_PERM: usize = 128;
const PAIRS: usize = 1_200;

/// Build a pair of shingle sets with exactly `shared` common elements and
/// `only` elements private to each side, so J = shared / (shared + 2·only).
fn pair_with_overlap(shared: usize, only: usize, rng: &mut impl Rng) -> (ShingleSet, ShingleSet) {
    let mut token = || vec![format!("tok{}", rng.gen::<u64>())];
    let common: Vec<Vec<String>> = (0..shared).map(|_| token()).collect();
    let a: ShingleSet = common
        .iter()
        .cloned()
        .chain((0..only).map(|_| token()))
        .collect();
    let b: ShingleSet = common
        .into_iter()
        .chain((0..only).map(|_| token()))
        .collect();
    (a, b)
}

/// Mean and standard deviation of the signature estimates over many pairs.
fn estimate_stats(shared: usize, only: usize, seed: u64) -> (f64, f64, f64) {
    let hasher = MinHasher::new(NUM_PERM, 9).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut estimates = Vec::with_capacity(PAIRS);
    let mut true_jaccard = None;
    for _ in 0..PAIRS {
        let (a, b) = pair_with_overlap(shared, only, &mut rng);
        let exact = a.exact_jaccard(&b);
        *true_jaccard.get_or_insert(exact) = exact;
        let sig_a = hasher.signature(&a);
        let sig_b = hasher.signature(&b);
        estimates.push(exprank::minhash::estimate_jaccard(&sig_a, &sig_b).unwrap());
    }
    let mean = estimates.iter().sum::<f64>() / PAIRS as f64;
    let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (PAIRS - 1) as f64;
    (true_jaccard.unwrap(), mean, var.sqrt())
}

#[test]
fn estimates_are_unbiased_at_half_similarity() {
    // 20 shared + 10 each side: J = 20/40 = 0.5.
    let (exact, mean, std) = estimate_stats(20, 10, 42);
    assert_eq!(exact, 0.5);
    assert!((mean - 0.5).abs() < 0.01, "biased estimate: mean {mean}");
    let floor = (0.5f64 * 0.5 / NUM_PERM as f64).sqrt();
    assert!(
        std > 0.6 * floor && std < 1.4 * floor,
        "std {std} far from binomial floor {floor}"
    );
}

#[test]
fn estimates_are_unbiased_near_the_operating_threshold() {
    // 18 shared + 1 each side: J = 18/20 = 0.9, the grouping threshold.
    let (exact, mean, std) = estimate_stats(18, 1, 43);
    assert!((exact - 0.9).abs() < 1e-12);
    assert!((mean - 0.9).abs() < 0.01, "biased estimate: mean {mean}");
    let floor = (0.9f64 * 0.1 / NUM_PERM as f64).sqrt();
    assert!(
        std > 0.6 * floor && std < 1.4 * floor,
        "std {std} far from binomial floor {floor}"
    );
}

#[test]
fn identical_and_disjoint_pairs_hit_the_extremes() {
    let hasher = MinHasher::new(NUM_PERM, 9).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(44);
    for _ in 0..50 {
        let (same_a, _) = pair_with_overlap(12, 0, &mut rng);
        let sig = hasher.signature(&same_a);
        assert_eq!(exprank::minhash::estimate_jaccard(&sig, &sig).unwrap(), 1.0);
        let (a, b) = pair_with_overlap(0, 12, &mut rng);
        let sig_a = hasher.signature(&a);
        let sig_b = hasher.signature(&b);
        assert!(exprank::minhash::estimate_jaccard(&sig_a, &sig_b).unwrap() <= 0.05);
    }
}
