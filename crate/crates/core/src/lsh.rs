//! Banded LSH index over MinHash signatures.
//!
//! Signatures are cut into `b` bands of `r` rows (`b·r = k`); two keys
//! become candidates when any band matches exactly. Banding alone
//! over-admits, so every candidate is verified against the
//! signature-estimated Jaccard before it is returned: each key in a query
//! result satisfies `estimate_jaccard ≥ threshold`. Expected query cost is
//! sub-linear in the index size because only colliding buckets are touched.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::minhash::{band_params, estimate_jaccard, MinHashSignature};

/// One bucket table per band, keyed by the band's row slice.
type BandTable = HashMap<Box<[u64]>, HashSet<u64>>;

/// In-memory insert/query/remove index for near-duplicate lookup above a
/// similarity threshold.
#[derive(Debug, Clone)]
pub struct LshIndex {
    threshold: f64,
    num_perm: usize,
    seed: u64,
    rows_per_band: usize,
    bands: Vec<BandTable>,
    store: HashMap<u64, MinHashSignature>,
}

impl LshIndex {
    /// Build an empty index for signatures produced with `(num_perm, seed)`.
    /// The banding is chosen by [`band_params`] for the given threshold.
    pub fn new(threshold: f64, num_perm: usize, seed: u64) -> Result<Self> {
        let (num_bands, rows_per_band) = band_params(threshold, num_perm)?;
        Ok(LshIndex {
            threshold,
            num_perm,
            seed,
            rows_per_band,
            bands: vec![BandTable::new(); num_bands],
            store: HashMap::new(),
        })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn num_bands(&self) -> usize {
        self.bands.len()
    }

    pub fn rows_per_band(&self) -> usize {
        self.rows_per_band
    }

    /// Number of keys currently present.
    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }

    pub fn contains(&self, key: u64) -> bool {
        self.store.contains_key(&key)
    }

    fn check_compatible(&self, sig: &MinHashSignature) -> Result<()> {
        if sig.seed != self.seed {
            return Err(Error::IncompatibleSignature(format!(
                "index seed {} vs signature seed {}",
                self.seed, sig.seed
            )));
        }
        if sig.mins.len() != self.num_perm {
            return Err(Error::IncompatibleSignature(format!(
                "index num_perm {} vs signature length {}",
                self.num_perm,
                sig.mins.len()
            )));
        }
        Ok(())
    }

    fn band_slices<'a>(&self, sig: &'a MinHashSignature) -> impl Iterator<Item = &'a [u64]> {
        let r = self.rows_per_band;
        sig.mins.chunks_exact(r)
    }

    /// Insert a key with its signature. The key must not already be present.
    pub fn insert(&mut self, key: u64, sig: MinHashSignature) -> Result<()> {
        self.check_compatible(&sig)?;
        if self.store.contains_key(&key) {
            return Err(Error::DuplicateKey(key));
        }
        for (table, rows) in self
            .bands
            .iter_mut()
            .zip(sig.mins.chunks_exact(self.rows_per_band))
        {
            table.entry(rows.into()).or_default().insert(key);
        }
        self.store.insert(key, sig);
        Ok(())
    }

    /// All keys sharing at least one band with `sig` whose estimated Jaccard
    /// against `sig` is at least the index threshold, in ascending key order.
    pub fn query(&self, sig: &MinHashSignature) -> Result<Vec<u64>> {
        self.check_compatible(sig)?;
        let mut candidates = BTreeSet::new();
        for (table, rows) in self.bands.iter().zip(self.band_slices(sig)) {
            if let Some(bucket) = table.get(rows) {
                candidates.extend(bucket.iter().copied());
            }
        }
        let mut hits = Vec::new();
        for key in candidates {
            let stored = &self.store[&key];
            if estimate_jaccard(sig, stored)? >= self.threshold {
                hits.push(key);
            }
        }
        Ok(hits)
    }

    /// Remove a key; it never appears in later query results. The key must
    /// be present.
    pub fn remove(&mut self, key: u64) -> Result<()> {
        let sig = self.store.remove(&key).ok_or(Error::MissingKey(key))?;
        let r = self.rows_per_band;
        for (table, rows) in self.bands.iter_mut().zip(sig.mins.chunks_exact(r)) {
            if let Some(bucket) = table.get_mut(rows) {
                bucket.remove(&key);
                if bucket.is_empty() {
                    table.remove(rows);
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minhash::{minhash, shingles, MinHasher, ShingleSet};

    const SEED: u64 = 42;

    fn sig(text: &str) -> MinHashSignature {
        minhash(&shingles(text, 2), 128, SEED).unwrap()
    }

    #[test]
    fn inserted_keys_self_retrieve() {
        let mut index = LshIndex::new(0.9, 128, SEED).unwrap();
        let s = sig("the food is good and the service is great");
        index.insert(1, s.clone()).unwrap();
        assert_eq!(index.query(&s).unwrap(), vec![1]);
        assert_eq!(index.len(), 1);
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let mut index = LshIndex::new(0.9, 128, SEED).unwrap();
        let s = sig("the food is good");
        index.insert(1, s.clone()).unwrap();
        assert!(matches!(index.insert(1, s), Err(Error::DuplicateKey(1))));
    }

    #[test]
    fn query_on_empty_index_is_empty() {
        let index = LshIndex::new(0.9, 128, SEED).unwrap();
        assert!(index.query(&sig("anything at all")).unwrap().is_empty());
    }

    #[test]
    fn removed_keys_never_return() {
        let mut index = LshIndex::new(0.9, 128, SEED).unwrap();
        let s = sig("the room was clean and quiet");
        index.insert(7, s.clone()).unwrap();
        index.remove(7).unwrap();
        assert!(index.query(&s).unwrap().is_empty());
        assert!(!index.contains(7));
        assert!(matches!(index.remove(7), Err(Error::MissingKey(7))));
    }

    #[test]
    fn incompatible_signatures_are_rejected() {
        let mut index = LshIndex::new(0.9, 128, SEED).unwrap();
        let other_seed = minhash(&shingles("good food", 2), 128, SEED + 1).unwrap();
        assert!(index.insert(1, other_seed.clone()).is_err());
        assert!(index.query(&other_seed).is_err());
        let other_len = minhash(&shingles("good food", 2), 64, SEED).unwrap();
        assert!(index.query(&other_len).is_err());
    }

    #[test]
    fn dissimilar_sentences_do_not_collide() {
        let mut index = LshIndex::new(0.9, 128, SEED).unwrap();
        index
            .insert(1, sig("the hotel lobby was beautiful and spacious"))
            .unwrap();
        index
            .insert(2, sig("terrible acting ruined an otherwise decent plot"))
            .unwrap();
        let hits = index
            .query(&sig("the pasta arrived cold but tasted fine"))
            .unwrap();
        assert!(hits.is_empty());
    }

    #[test]
    fn every_hit_passes_threshold_verification() {
        let hasher = MinHasher::new(128, SEED).unwrap();
        let mut index = LshIndex::new(0.9, 128, SEED).unwrap();
        // Near-identical family plus unrelated fillers.
        let base: Vec<String> = (0..30).map(|i| format!("tok{i}")).collect();
        for k in 0..10u64 {
            let mut words = base.clone();
            words.push(format!("tail{k}"));
            let set: ShingleSet = words.windows(2).map(|w| w.to_vec()).collect();
            index.insert(k, hasher.signature(&set)).unwrap();
        }
        let probe_set: ShingleSet = base.windows(2).map(|w| w.to_vec()).collect();
        let probe = hasher.signature(&probe_set);
        for key in index.query(&probe).unwrap() {
            let stored = index.store[&key].clone();
            assert!(estimate_jaccard(&probe, &stored).unwrap() >= 0.9);
        }
    }

    #[test]
    fn survivors_of_bulk_removal_self_retrieve_exactly() {
        let hasher = MinHasher::new(128, SEED).unwrap();
        let mut index = LshIndex::new(0.9, 128, SEED).unwrap();
        let sigs: Vec<MinHashSignature> = (0..100u64)
            .map(|k| {
                let set: ShingleSet = (0..12)
                    .map(|i| vec![format!("k{k}w{i}"), format!("k{k}w{}", i + 1)])
                    .collect();
                hasher.signature(&set)
            })
            .collect();
        for (k, s) in sigs.iter().enumerate() {
            index.insert(k as u64, s.clone()).unwrap();
        }
        for k in 0..50u64 {
            index.remove(k).unwrap();
        }
        for (k, s) in sigs.iter().enumerate() {
            let hits = index.query(s).unwrap();
            if (k as u64) < 50 {
                assert!(!hits.contains(&(k as u64)), "removed key {k} returned");
            } else {
                assert_eq!(
                    hits,
                    vec![k as u64],
                    "survivor {k} should self-retrieve alone"
                );
            }
        }
        assert_eq!(index.len(), 50);
    }

    #[test]
    fn ten_thousand_distinct_keys_all_self_retrieve() {
        let hasher = MinHasher::new(128, SEED).unwrap();
        let mut index = LshIndex::new(0.9, 128, SEED).unwrap();
        let sigs: Vec<MinHashSignature> = (0..10_000u64)
            .map(|k| {
                let set: ShingleSet = (0..8).map(|i| vec![format!("u{k}x{i}")]).collect();
                hasher.signature(&set)
            })
            .collect();
        for (k, s) in sigs.iter().enumerate() {
            index.insert(k as u64, s.clone()).unwrap();
        }
        for (k, s) in sigs.iter().enumerate() {
            assert!(index.query(s).unwrap().contains(&(k as u64)));
        }
    }
}
