//! Build user-item-explanation ranking datasets from raw review corpora and
//! benchmark explanation-ranking baselines on them.
//!
//! The pipeline has two halves:
//!
//! 1. **Dataset construction**: parse a review corpus ([`ingest`]), keep only
//!    explanation-quality sentences ([`filter`]), group near-duplicate
//!    sentences with MinHash LSH ([`minhash`], [`lsh`], [`grouping`]) and
//!    materialize the result as a two-file dataset ([`dataset`]).
//! 2. **Benchmarking**: produce coverage-constrained train/test splits
//!    ([`dataset`]), score explanations with five baseline rankers
//!    ([`rankers`]) and evaluate top-N rankings with NDCG, precision, recall
//!    and F1 ([`eval`]).
//!
//! Every stage is deterministic given its inputs and seeds.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod filter;
pub mod grouping;
pub mod ingest;
pub mod lsh;
pub mod minhash;
pub mod rankers;
pub mod text;

pub use error::{Error, Result};
