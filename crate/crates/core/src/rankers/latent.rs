//! Latent-factor scorers (CD and PITF) and their pairwise training loop.
//!
//! CD scores a triple as the sum of element-wise products of three factor
//! vectors; PITF scores it as two inner products, pairing users and items
//! with separate explanation embeddings. Both are trained on pairwise
//! preferences: for each observed triple a random unobserved explanation is
//! drawn and the logistic pairwise loss
//! `−ln σ(r(u,i,e⁺) − r(u,i,e⁻)) + λ‖Θ_step‖²` is minimized by SGD, where
//! `Θ_step` is the set of factor rows the step touches.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::Triplet;
use crate::error::{Error, Result};
use crate::eval::Scorer;

/// Which factorization a model uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Cd,
    Pitf,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Cd => "CD",
            Variant::Pitf => "PITF",
        })
    }
}

/// Dense row-major matrix of factor rows.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl FactorMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FactorMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    fn random(rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        let normal = Normal::new(0.0, INIT_STDDEV).expect("valid stddev");
        FactorMatrix {
            rows,
            cols,
            data: (0..rows * cols).map(|_| normal.sample(rng)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn values(&self) -> &[f64] {
        &self.data
    }
}

/// Explanation-side factors: one matrix for CD, a user-paired and an
/// item-paired matrix for PITF.
#[derive(Debug, Clone, PartialEq)]
pub enum ExplanationFactors {
    Cd(FactorMatrix),
    Pitf {
        user_side: FactorMatrix,
        item_side: FactorMatrix,
    },
}

/// Names one factor matrix inside a model, for gradient bookkeeping and
/// entry-level access in tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixRef {
    P,
    Q,
    O,
    OUser,
    OItem,
}

/// A trained (or initialized) factor model.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentModel {
    pub d: usize,
    pub seed: u64,
    pub p: FactorMatrix,
    pub q: FactorMatrix,
    pub exp_factors: ExplanationFactors,
}

const INIT_STDDEV: f64 = 0.1;
/// Logistic arguments are clamped here to keep `exp` in range.
const LOGISTIC_CLAMP: f64 = 35.0;

impl LatentModel {
    /// Fresh model with factors drawn from N(0, 0.1²), in the fixed order
    /// P, Q, then explanation factors, from a ChaCha stream seeded by
    /// `seed`.
    pub fn init(
        variant: Variant,
        n_users: usize,
        n_items: usize,
        n_explanations: usize,
        d: usize,
        seed: u64,
    ) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        Self::init_with(variant, n_users, n_items, n_explanations, d, seed, &mut rng)
    }

    fn init_with(
        variant: Variant,
        n_users: usize,
        n_items: usize,
        n_explanations: usize,
        d: usize,
        seed: u64,
        rng: &mut impl Rng,
    ) -> Self {
        let p = FactorMatrix::random(n_users, d, rng);
        let q = FactorMatrix::random(n_items, d, rng);
        let exp_factors = match variant {
            Variant::Cd => ExplanationFactors::Cd(FactorMatrix::random(n_explanations, d, rng)),
            Variant::Pitf => ExplanationFactors::Pitf {
                user_side: FactorMatrix::random(n_explanations, d, rng),
                item_side: FactorMatrix::random(n_explanations, d, rng),
            },
        };
        LatentModel {
            d,
            seed,
            p,
            q,
            exp_factors,
        }
    }

    pub fn variant(&self) -> Variant {
        match self.exp_factors {
            ExplanationFactors::Cd(_) => Variant::Cd,
            ExplanationFactors::Pitf { .. } => Variant::Pitf,
        }
    }

    pub fn n_users(&self) -> usize {
        self.p.rows()
    }

    pub fn n_items(&self) -> usize {
        self.q.rows()
    }

    pub fn n_explanations(&self) -> usize {
        match &self.exp_factors {
            ExplanationFactors::Cd(o) => o.rows(),
            ExplanationFactors::Pitf { user_side, .. } => user_side.rows(),
        }
    }

    /// The matrix behind a [`MatrixRef`]; panics if the variant lacks it.
    pub fn matrix(&self, which: MatrixRef) -> &FactorMatrix {
        match (which, &self.exp_factors) {
            (MatrixRef::P, _) => &self.p,
            (MatrixRef::Q, _) => &self.q,
            (MatrixRef::O, ExplanationFactors::Cd(o)) => o,
            (MatrixRef::OUser, ExplanationFactors::Pitf { user_side, .. }) => user_side,
            (MatrixRef::OItem, ExplanationFactors::Pitf { item_side, .. }) => item_side,
            (which, _) => panic!("{:?} model has no {which:?} matrix", self.variant()),
        }
    }

    pub fn matrix_mut(&mut self, which: MatrixRef) -> &mut FactorMatrix {
        match (which, &mut self.exp_factors) {
            (MatrixRef::P, _) => &mut self.p,
            (MatrixRef::Q, _) => &mut self.q,
            (MatrixRef::O, ExplanationFactors::Cd(o)) => o,
            (MatrixRef::OUser, ExplanationFactors::Pitf { user_side, .. }) => user_side,
            (MatrixRef::OItem, ExplanationFactors::Pitf { item_side, .. }) => item_side,
            (which, _) => panic!("model has no {which:?} matrix"),
        }
    }

    fn score_unchecked(&self, u: u32, i: u32, e: u32) -> f64 {
        let p = self.p.row(u as usize);
        let q = self.q.row(i as usize);
        match &self.exp_factors {
            ExplanationFactors::Cd(o) => {
                let o = o.row(e as usize);
                p.iter().zip(q).zip(o).map(|((&p, &q), &o)| p * q * o).sum()
            }
            ExplanationFactors::Pitf {
                user_side,
                item_side,
            } => dot(p, user_side.row(e as usize)) + dot(q, item_side.row(e as usize)),
        }
    }

    /// First non-finite entry, as (matrix, flat position), if any.
    fn find_non_finite(&self) -> Option<(MatrixRef, usize)> {
        let mut scan: Vec<(MatrixRef, &FactorMatrix)> =
            vec![(MatrixRef::P, &self.p), (MatrixRef::Q, &self.q)];
        match &self.exp_factors {
            ExplanationFactors::Cd(o) => scan.push((MatrixRef::O, o)),
            ExplanationFactors::Pitf {
                user_side,
                item_side,
            } => {
                scan.push((MatrixRef::OUser, user_side));
                scan.push((MatrixRef::OItem, item_side));
            }
        }
        for (which, m) in scan {
            if let Some(pos) = m.values().iter().position(|v| !v.is_finite()) {
                return Some((which, pos));
            }
        }
        None
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn squared_norm(a: &[f64]) -> f64 {
    a.iter().map(|&x| x * x).sum()
}

fn sigmoid(x: f64) -> f64 {
    let x = x.clamp(-LOGISTIC_CLAMP, LOGISTIC_CLAMP);
    1.0 / (1.0 + (-x).exp())
}

/// CD score: Σ_k p_{u,k} · q_{i,k} · o_{e,k}.
pub fn score_cd(model: &LatentModel, u: u32, i: u32, e: u32) -> Result<f64> {
    if model.variant() != Variant::Cd {
        return Err(Error::VariantMismatch {
            expected: Variant::Cd.to_string(),
            got: model.variant().to_string(),
        });
    }
    Ok(model.score_unchecked(u, i, e))
}

/// PITF score: p_u · o_e^U + q_i · o_e^I.
pub fn score_pitf(model: &LatentModel, u: u32, i: u32, e: u32) -> Result<f64> {
    if model.variant() != Variant::Pitf {
        return Err(Error::VariantMismatch {
            expected: Variant::Pitf.to_string(),
            got: model.variant().to_string(),
        });
    }
    Ok(model.score_unchecked(u, i, e))
}

/// Pairwise loss of one step: `−ln σ(r⁺ − r⁻)` plus `lambda` times the
/// squared Frobenius norm of the rows this step touches (p_u, q_i, and the
/// positive/negative explanation rows).
pub fn bpr_step_loss(
    model: &LatentModel,
    u: u32,
    i: u32,
    e_pos: u32,
    e_neg: u32,
    lambda: f64,
) -> f64 {
    debug_assert_ne!(
        e_pos, e_neg,
        "positive and negative explanations must differ"
    );
    let x = model.score_unchecked(u, i, e_pos) - model.score_unchecked(u, i, e_neg);
    let x = x.clamp(-LOGISTIC_CLAMP, LOGISTIC_CLAMP);
    let mut reg = squared_norm(model.p.row(u as usize)) + squared_norm(model.q.row(i as usize));
    match &model.exp_factors {
        ExplanationFactors::Cd(o) => {
            reg += squared_norm(o.row(e_pos as usize)) + squared_norm(o.row(e_neg as usize));
        }
        ExplanationFactors::Pitf {
            user_side,
            item_side,
        } => {
            for m in [user_side, item_side] {
                reg += squared_norm(m.row(e_pos as usize)) + squared_norm(m.row(e_neg as usize));
            }
        }
    }
    // −ln σ(x) = ln(1 + e^{−x}), computed without forming σ.
    (-x).exp().ln_1p() + lambda * reg
}

/// Gradient of [`bpr_step_loss`] with respect to one factor row.
#[derive(Debug, Clone)]
pub struct StepGrad {
    pub matrix: MatrixRef,
    pub row: u32,
    pub grad: Vec<f64>,
}

/// Analytic gradients of [`bpr_step_loss`] for every row the step touches.
/// The regularizer contributes `2·lambda·θ` to each of its rows.
pub fn bpr_step_gradients(
    model: &LatentModel,
    u: u32,
    i: u32,
    e_pos: u32,
    e_neg: u32,
    lambda: f64,
) -> Vec<StepGrad> {
    let x = model.score_unchecked(u, i, e_pos) - model.score_unchecked(u, i, e_neg);
    // d(−ln σ(x))/dx = σ(x) − 1.
    let c = sigmoid(x) - 1.0;
    let p = model.p.row(u as usize);
    let q = model.q.row(i as usize);
    let d = model.d;
    let reg = |row: &[f64], k: usize| 2.0 * lambda * row[k];

    match &model.exp_factors {
        ExplanationFactors::Cd(o) => {
            let op = o.row(e_pos as usize);
            let on = o.row(e_neg as usize);
            let dp = (0..d)
                .map(|k| c * q[k] * (op[k] - on[k]) + reg(p, k))
                .collect();
            let dq = (0..d)
                .map(|k| c * p[k] * (op[k] - on[k]) + reg(q, k))
                .collect();
            let dop = (0..d).map(|k| c * p[k] * q[k] + reg(op, k)).collect();
            let don = (0..d).map(|k| -c * p[k] * q[k] + reg(on, k)).collect();
            vec![
                StepGrad {
                    matrix: MatrixRef::P,
                    row: u,
                    grad: dp,
                },
                StepGrad {
                    matrix: MatrixRef::Q,
                    row: i,
                    grad: dq,
                },
                StepGrad {
                    matrix: MatrixRef::O,
                    row: e_pos,
                    grad: dop,
                },
                StepGrad {
                    matrix: MatrixRef::O,
                    row: e_neg,
                    grad: don,
                },
            ]
        }
        ExplanationFactors::Pitf {
            user_side,
            item_side,
        } => {
            let oup = user_side.row(e_pos as usize);
            let oun = user_side.row(e_neg as usize);
            let oip = item_side.row(e_pos as usize);
            let oin = item_side.row(e_neg as usize);
            let dp = (0..d).map(|k| c * (oup[k] - oun[k]) + reg(p, k)).collect();
            let dq = (0..d).map(|k| c * (oip[k] - oin[k]) + reg(q, k)).collect();
            let doup = (0..d).map(|k| c * p[k] + reg(oup, k)).collect();
            let doun = (0..d).map(|k| -c * p[k] + reg(oun, k)).collect();
            let doip = (0..d).map(|k| c * q[k] + reg(oip, k)).collect();
            let doin = (0..d).map(|k| -c * q[k] + reg(oin, k)).collect();
            vec![
                StepGrad {
                    matrix: MatrixRef::P,
                    row: u,
                    grad: dp,
                },
                StepGrad {
                    matrix: MatrixRef::Q,
                    row: i,
                    grad: dq,
                },
                StepGrad {
                    matrix: MatrixRef::OUser,
                    row: e_pos,
                    grad: doup,
                },
                StepGrad {
                    matrix: MatrixRef::OUser,
                    row: e_neg,
                    grad: doun,
                },
                StepGrad {
                    matrix: MatrixRef::OItem,
                    row: e_pos,
                    grad: doip,
                },
                StepGrad {
                    matrix: MatrixRef::OItem,
                    row: e_neg,
                    grad: doin,
                },
            ]
        }
    }
}

/// Hyper-parameters of the SGD loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    /// Factor dimensionality d.
    pub d: usize,
    /// Regularization weight λ.
    pub lambda: f64,
    /// Learning rate γ.
    pub gamma: f64,
    /// Number of full passes T over the training triplets.
    pub iters: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            d: 20,
            lambda: 0.01,
            gamma: 0.01,
            iters: 500,
            seed: 0,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(Error::InvalidConfig("d must be at least 1".into()));
        }
        if self.lambda < 0.0 {
            return Err(Error::InvalidConfig("lambda must be non-negative".into()));
        }
        if self.gamma <= 0.0 {
            return Err(Error::InvalidConfig("gamma must be positive".into()));
        }
        if self.iters < 1 {
            return Err(Error::InvalidConfig("iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// A trained model plus the mean per-step loss of each pass.
#[derive(Debug, Clone)]
pub struct TrainResult {
    pub model: LatentModel,
    pub loss_by_iter: Vec<f64>,
}

/// Train a CD or PITF model with pairwise SGD.
///
/// Each pass shuffles the training triplets; each triplet draws one negative
/// explanation uniformly from those not linked to its (user, item) pair,
/// then descends the analytic gradients of [`bpr_step_loss`] at rate γ.
/// Single-threaded and bit-reproducible for a fixed `(train, config)`.
pub fn train_bpr(
    train: &[Triplet],
    variant: Variant,
    n_users: usize,
    n_items: usize,
    n_explanations: usize,
    config: &TrainConfig,
) -> Result<TrainResult> {
    config.validate()?;
    if train.is_empty() {
        return Err(Error::InvalidConfig("empty training split".into()));
    }
    let mut pos_per_pair: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
    for t in train {
        if t.user as usize >= n_users {
            return Err(Error::UnknownEntity {
                kind: "user",
                id: t.user.to_string(),
            });
        }
        if t.item as usize >= n_items {
            return Err(Error::UnknownEntity {
                kind: "item",
                id: t.item.to_string(),
            });
        }
        if t.explanation as usize >= n_explanations {
            return Err(Error::UnknownEntity {
                kind: "explanation",
                id: t.explanation.to_string(),
            });
        }
        pos_per_pair
            .entry((t.user, t.item))
            .or_default()
            .push(t.explanation);
    }
    for exps in pos_per_pair.values_mut() {
        exps.sort_unstable();
        exps.dedup();
    }

    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let mut model = init_for_training(variant, n_users, n_items, n_explanations, config, &mut rng);

    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut loss_by_iter = Vec::with_capacity(config.iters);
    for iter in 0..config.iters {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        let mut steps = 0usize;
        for &idx in &order {
            let t = train[idx];
            let positives = &pos_per_pair[&(t.user, t.item)];
            if positives.len() >= n_explanations {
                // Every explanation is positive for this pair; no negative
                // exists to contrast against.
                continue;
            }
            let e_neg = loop {
                let cand = rng.gen_range(0..n_explanations as u32);
                if positives.binary_search(&cand).is_err() {
                    break cand;
                }
            };
            loss_sum += bpr_step_loss(&model, t.user, t.item, t.explanation, e_neg, config.lambda);
            let grads =
                bpr_step_gradients(&model, t.user, t.item, t.explanation, e_neg, config.lambda);
            for g in grads {
                let row = model.matrix_mut(g.matrix).row_mut(g.row as usize);
                for (theta, grad) in row.iter_mut().zip(&g.grad) {
                    *theta -= config.gamma * grad;
                }
            }
            steps += 1;
        }
        let mean = if steps == 0 {
            0.0
        } else {
            loss_sum / steps as f64
        };
        if !mean.is_finite() {
            return Err(Error::NonFinite(format!(
                "mean training loss {mean} at iteration {iter}"
            )));
        }
        loss_by_iter.push(mean);
    }
    if let Some((which, pos)) = model.find_non_finite() {
        return Err(Error::NonFinite(format!(
            "parameter {pos} of matrix {which:?} after training"
        )));
    }
    Ok(TrainResult {
        model,
        loss_by_iter,
    })
}

fn init_for_training(
    variant: Variant,
    n_users: usize,
    n_items: usize,
    n_explanations: usize,
    config: &TrainConfig,
    rng: &mut impl Rng,
) -> LatentModel {
    LatentModel::init_with(
        variant,
        n_users,
        n_items,
        n_explanations,
        config.d,
        config.seed,
        rng,
    )
}

impl Scorer for LatentModel {
    fn score(&self, u: u32, i: u32, e: u32) -> f64 {
        self.score_unchecked(u, i, e)
    }

    /// Batched scoring: CD folds p_u ⊙ q_i once and dots it against each
    /// explanation row; PITF dots the two fixed rows against each pair of
    /// explanation rows.
    fn score_candidates(&self, u: u32, i: u32, candidates: &[u32]) -> Vec<f64> {
        let p = self.p.row(u as usize);
        let q = self.q.row(i as usize);
        match &self.exp_factors {
            ExplanationFactors::Cd(o) => {
                let w: Vec<f64> = p.iter().zip(q).map(|(&a, &b)| a * b).collect();
                candidates
                    .iter()
                    .map(|&e| dot(&w, o.row(e as usize)))
                    .collect()
            }
            ExplanationFactors::Pitf {
                user_side,
                item_side,
            } => candidates
                .iter()
                .map(|&e| dot(p, user_side.row(e as usize)) + dot(q, item_side.row(e as usize)))
                .collect(),
        }
    }
}

const CHECKPOINT_MAGIC: &str = "exprank-model 1";

/// Write a model as a versioned text dump: a header, then each matrix as a
/// section of one space-separated row per line. Floats are printed in
/// Rust's shortest round-trip form, so save → load is exact.
pub fn save_checkpoint(model: &LatentModel, path: &Path) -> Result<()> {
    use std::fmt::Write as _;
    let mut out = String::new();
    let variant = match model.variant() {
        Variant::Cd => "cd",
        Variant::Pitf => "pitf",
    };
    let _ = writeln!(out, "{CHECKPOINT_MAGIC}");
    let _ = writeln!(out, "variant {variant}");
    let _ = writeln!(out, "d {}", model.d);
    let _ = writeln!(out, "seed {}", model.seed);
    let _ = writeln!(out, "users {}", model.n_users());
    let _ = writeln!(out, "items {}", model.n_items());
    let _ = writeln!(out, "explanations {}", model.n_explanations());
    let mut sections: Vec<(&str, &FactorMatrix)> = vec![("P", &model.p), ("Q", &model.q)];
    match &model.exp_factors {
        ExplanationFactors::Cd(o) => sections.push(("O", o)),
        ExplanationFactors::Pitf {
            user_side,
            item_side,
        } => {
            sections.push(("OU", user_side));
            sections.push(("OI", item_side));
        }
    }
    for (name, matrix) in sections {
        let _ = writeln!(out, "{name}");
        for r in 0..matrix.rows() {
            let row: Vec<String> = matrix.row(r).iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Load a model written by [`save_checkpoint`].
pub fn load_checkpoint(path: &Path) -> Result<LatentModel> {
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = raw.lines().enumerate();
    let mut next = |expect: &str| -> Result<(usize, String)> {
        lines
            .next()
            .map(|(n, l)| (n + 1, l.to_string()))
            .ok_or_else(|| Error::malformed(path, 0, format!("missing {expect}")))
    };

    let (n, magic) = next("header")?;
    if magic != CHECKPOINT_MAGIC {
        return Err(Error::malformed(path, n, "not an exprank model checkpoint"));
    }
    let mut header = HashMap::new();
    let mut header_lines = 0;
    while header_lines < 6 {
        let (n, line) = next("header field")?;
        let (key, value) = line
            .split_once(' ')
            .ok_or_else(|| Error::malformed(path, n, "bad header field"))?;
        header.insert(key.to_string(), (n, value.to_string()));
        header_lines += 1;
    }
    let field = |key: &str| -> Result<(usize, String)> {
        header
            .get(key)
            .cloned()
            .ok_or_else(|| Error::malformed(path, 0, format!("missing header field {key}")))
    };
    let parse_count = |key: &str| -> Result<usize> {
        let (n, v) = field(key)?;
        v.parse()
            .map_err(|_| Error::malformed(path, n, format!("bad {key} count {v:?}")))
    };
    let (variant_line, variant_name) = field("variant")?;
    let variant = match variant_name.as_str() {
        "cd" => Variant::Cd,
        "pitf" => Variant::Pitf,
        other => {
            return Err(Error::malformed(
                path,
                variant_line,
                format!("unknown variant {other:?}"),
            ))
        }
    };
    let d = parse_count("d")?;
    let (seed_line, seed_str) = field("seed")?;
    let seed: u64 = seed_str
        .parse()
        .map_err(|_| Error::malformed(path, seed_line, "bad seed"))?;
    let n_users = parse_count("users")?;
    let n_items = parse_count("items")?;
    let n_explanations = parse_count("explanations")?;

    let mut read_matrix = |name: &str, rows: usize| -> Result<FactorMatrix> {
        let (n, line) = next(&format!("section {name}"))?;
        if line != name {
            return Err(Error::malformed(
                path,
                n,
                format!("expected section {name}, found {line:?}"),
            ));
        }
        let mut m = FactorMatrix::zeros(rows, d);
        for r in 0..rows {
            let (n, line) = next(&format!("row {r} of {name}"))?;
            let mut count = 0;
            for (k, tok) in line.split_whitespace().enumerate() {
                if k >= d {
                    return Err(Error::malformed(path, n, "too many columns"));
                }
                m.row_mut(r)[k] = tok
                    .parse()
                    .map_err(|_| Error::malformed(path, n, format!("bad float {tok:?}")))?;
                count += 1;
            }
            if count != d {
                return Err(Error::malformed(
                    path,
                    n,
                    format!("expected {d} columns, got {count}"),
                ));
            }
        }
        Ok(m)
    };

    let p = read_matrix("P", n_users)?;
    let q = read_matrix("Q", n_items)?;
    let exp_factors = match variant {
        Variant::Cd => ExplanationFactors::Cd(read_matrix("O", n_explanations)?),
        Variant::Pitf => {
            let user_side = read_matrix("OU", n_explanations)?;
            let item_side = read_matrix("OI", n_explanations)?;
            ExplanationFactors::Pitf {
                user_side,
                item_side,
            }
        }
    };
    Ok(LatentModel {
        d,
        seed,
        p,
        q,
        exp_factors,
    })
}
