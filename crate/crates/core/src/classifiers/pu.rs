//! Positive-unlabeled bagging.
//!
//! Each of the K rounds draws a bootstrap sample of the unlabeled pool sized
//! to the positive class, trains a linear base model on positives vs sample,
//! and credits every out-of-bag unlabeled vector with the model's score.
//! Averaged OOB scores rank the unlabeled pool by how positive it looks.
//!
//! Rounds are independent given their derived seeds, so they may run in
//! parallel; accumulation always happens in round order, which makes the
//! serial and parallel results identical.

use super::{train_linear, ClassifierError, FeatureVector, LinearModel, Loss, TrainConfig};
use crate::hashing::seed_for_index;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Per-unlabeled-record out-of-bag bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OobScore {
    /// Mean decision value over the models that did not train on the record;
    /// falls back to the all-model mean when the record was in every bag.
    pub score: f64,
    /// Number of models for which the record was out-of-bag.
    pub votes: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PuBaggingModel {
    base_models: Vec<LinearModel>,
    ensemble_size: usize,
    oob_scores: Vec<OobScore>,
    threshold: f64,
}

impl PuBaggingModel {
    pub fn base_models(&self) -> &[LinearModel] {
        &self.base_models
    }

    pub fn ensemble_size(&self) -> usize {
        self.ensemble_size
    }

    pub fn oob_scores(&self) -> &[OobScore] {
        &self.oob_scores
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn dimension(&self) -> usize {
        self.base_models[0].dimension()
    }

    /// Mean decision value over all base models, shifted by the threshold so
    /// that positive means Spam.
    pub fn score(&self, x: &impl FeatureVector) -> Result<f64, ClassifierError> {
        let mut sum = 0.0;
        for model in &self.base_models {
            sum += model.score(x)?;
        }
        Ok(sum / self.base_models.len() as f64 - self.threshold)
    }

    /// Unlabeled indices sorted by OOB score, most positive first; ties keep
    /// index order.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.oob_scores.len()).collect();
        order.sort_by(|&a, &b| {
            self.oob_scores[b]
                .score
                .partial_cmp(&self.oob_scores[a].score)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        order
    }
}

/// Train the bagged ensemble. Bootstrap draws and base-trainer seeds are both
/// derived from `cfg.seed` and the round index.
pub fn train_pu_bagging<V: FeatureVector + Sync>(
    positives: &[V],
    unlabeled: &[V],
    ensemble_size: usize,
    cfg: &TrainConfig,
) -> Result<PuBaggingModel, ClassifierError> {
    cfg.validate()?;
    if positives.is_empty() || unlabeled.is_empty() {
        return Err(ClassifierError::TooFewSamples(
            positives.len().min(unlabeled.len()),
        ));
    }
    if ensemble_size < 1 {
        return Err(ClassifierError::InvalidConfig(
            "ensemble size must be >= 1".into(),
        ));
    }

    struct Round {
        model: LinearModel,
        in_bag: Vec<bool>,
    }

    let rounds: Vec<Result<Round, ClassifierError>> = (0..ensemble_size)
        .into_par_iter()
        .map(|k| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed_for_index(cfg.seed, 2 * k as u64));
            let mut in_bag = vec![false; unlabeled.len()];
            let mut features: Vec<&V> = positives.iter().collect();
            let mut labels = vec![1i8; positives.len()];
            for _ in 0..positives.len() {
                let pick = rng.gen_range(0..unlabeled.len());
                in_bag[pick] = true;
                features.push(&unlabeled[pick]);
                labels.push(-1);
            }
            let round_cfg = cfg.with_seed(seed_for_index(cfg.seed, 2 * k as u64 + 1));
            let model = train_linear(&features, &labels, Loss::Hinge, &round_cfg)?;
            Ok(Round { model, in_bag })
        })
        .collect();

    let mut sums = vec![0.0f64; unlabeled.len()];
    let mut votes = vec![0usize; unlabeled.len()];
    let mut base_models = Vec::with_capacity(ensemble_size);
    for round in rounds {
        let round = round?;
        for (i, x) in unlabeled.iter().enumerate() {
            if !round.in_bag[i] {
                sums[i] += round.model.score(x)?;
                votes[i] += 1;
            }
        }
        base_models.push(round.model);
    }

    let oob_scores = sums
        .iter()
        .zip(&votes)
        .enumerate()
        .map(|(i, (&sum, &v))| {
            let score = if v > 0 {
                sum / v as f64
            } else {
                // In every bag: fall back to the all-model mean.
                let total: f64 = base_models
                    .iter()
                    .map(|m| m.score(&unlabeled[i]).expect("dimension checked"))
                    .sum();
                total / base_models.len() as f64
            };
            OobScore { score, votes: v }
        })
        .collect();

    Ok(PuBaggingModel {
        base_models,
        ensemble_size,
        oob_scores,
        threshold: 0.0,
    })
}
