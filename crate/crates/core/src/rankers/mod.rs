//! The five explanation scorers.
//!
//! Two neighborhood methods (user-side RUCF and item-side RICF) score by
//! summed Jaccard similarity of qualifying neighbors; two latent-factor
//! methods (CD and PITF) score with trained embeddings; RAND is the seeded
//! random floor. Everything scores the same `(user, item, explanation)`
//! triples and plugs into the evaluator through [`crate::eval::Scorer`].

pub mod latent;
pub mod neighbors;
pub mod random;

pub use latent::{
    bpr_step_gradients, bpr_step_loss, load_checkpoint, save_checkpoint, score_cd, score_pitf,
    train_bpr, FactorMatrix, LatentModel, MatrixRef, StepGrad, TrainConfig, TrainResult, Variant,
};
pub use neighbors::{
    jaccard_item_sim, jaccard_user_sim, score_ricf, score_rucf, NeighborIndex, RicfScorer,
    RucfScorer,
};
pub use random::{score_rand, RandScorer};
