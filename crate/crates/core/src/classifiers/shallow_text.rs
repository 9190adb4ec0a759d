//! Shallow text classifier: hashed token/bigram embeddings mean-pooled into
//! a document vector, topped by a flat two-class softmax, trained end to end
//! by SGD with a linearly decaying learning rate.
//!
//! Embedding rows live in hashed buckets so no vocabulary is required;
//! untouched buckets keep their seeded initialization, which prediction
//! recomputes on the fly.

use super::{ClassifierError, TrainConfig};
use crate::corpus::Label;
use crate::fnv1a_64;
use crate::hashing::seed_for_index;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Default number of hash buckets for token/bigram embeddings.
pub const DEFAULT_BUCKET_COUNT: usize = 1 << 20;

const CLASSES: usize = 2;
const HAM: usize = 0;
const SPAM: usize = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShallowTextModel {
    #[serde(
        serialize_with = "crate::serde_util::sorted_pairs",
        deserialize_with = "crate::serde_util::from_pairs"
    )]
    embeddings: HashMap<u64, Vec<f64>>,
    output_weights: Vec<Vec<f64>>,
    output_bias: Vec<f64>,
    dim: usize,
    bucket_count: usize,
    seed: u64,
}

impl ShallowTextModel {
    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn bucket_count(&self) -> usize {
        self.bucket_count
    }

    /// Buckets actually touched during training.
    pub fn trained_buckets(&self) -> usize {
        self.embeddings.len()
    }

    /// `[p_ham, p_spam]`, always a probability simplex point.
    pub fn predict_probs(&self, tokens: &[String]) -> [f64; 2] {
        let pooled = self.pool(&bucket_ids(tokens, self.bucket_count));
        let mut logits = [0.0f64; CLASSES];
        for (c, logit) in logits.iter_mut().enumerate() {
            *logit = self.output_bias[c]
                + self.output_weights[c]
                    .iter()
                    .zip(&pooled)
                    .map(|(w, h)| w * h)
                    .sum::<f64>();
        }
        softmax(logits)
    }

    pub fn predict_spam_probability(&self, tokens: &[String]) -> f64 {
        self.predict_probs(tokens)[SPAM]
    }

    fn bucket_vector(&self, bucket: u64) -> Vec<f64> {
        match self.embeddings.get(&bucket) {
            Some(v) => v.clone(),
            None => init_vector(self.seed, bucket, self.dim),
        }
    }

    fn pool(&self, buckets: &[u64]) -> Vec<f64> {
        let mut pooled = vec![0.0; self.dim];
        if buckets.is_empty() {
            return pooled;
        }
        for &b in buckets {
            for (acc, v) in pooled.iter_mut().zip(self.bucket_vector(b)) {
                *acc += v;
            }
        }
        let n = buckets.len() as f64;
        for v in &mut pooled {
            *v /= n;
        }
        pooled
    }
}

fn softmax(logits: [f64; CLASSES]) -> [f64; CLASSES] {
    let max = logits[0].max(logits[1]);
    let e0 = (logits[0] - max).exp();
    let e1 = (logits[1] - max).exp();
    let z = e0 + e1;
    [e0 / z, e1 / z]
}

/// Hash unigrams and adjacent bigrams into bucket ids, in token order.
fn bucket_ids(tokens: &[String], bucket_count: usize) -> Vec<u64> {
    let mut ids = Vec::with_capacity(tokens.len().saturating_mul(2));
    for token in tokens {
        ids.push(fnv1a_64(token.as_bytes()) % bucket_count as u64);
    }
    for pair in tokens.windows(2) {
        let joined = format!("{} {}", pair[0], pair[1]);
        ids.push(fnv1a_64(joined.as_bytes()) % bucket_count as u64);
    }
    ids
}

/// Uniform init in [-0.5/dim, 0.5/dim), derived from (seed, bucket).
fn init_vector(seed: u64, bucket: u64, dim: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for_index(seed, bucket));
    let half = 0.5 / dim as f64;
    (0..dim).map(|_| rng.gen_range(-half..half)).collect()
}

/// Train on tokenized documents. Both classes must be present and `dim >= 2`.
pub fn train_shallow_text(
    docs: &[Vec<String>],
    labels: &[Label],
    dim: usize,
    bucket_count: usize,
    cfg: &TrainConfig,
) -> Result<ShallowTextModel, ClassifierError> {
    cfg.validate()?;
    if docs.len() != labels.len() {
        return Err(ClassifierError::LengthMismatch {
            features: docs.len(),
            labels: labels.len(),
        });
    }
    if docs.len() < 2 {
        return Err(ClassifierError::TooFewSamples(docs.len()));
    }
    if dim < 2 {
        return Err(ClassifierError::InvalidConfig(format!(
            "embedding dim must be >= 2, got {dim}"
        )));
    }
    if bucket_count == 0 {
        return Err(ClassifierError::InvalidConfig("bucket_count must be > 0".into()));
    }
    let classes: Vec<usize> = labels
        .iter()
        .map(|l| match l {
            Label::Spam => Ok(SPAM),
            Label::Ham => Ok(HAM),
            Label::Unlabeled => Err(ClassifierError::InvalidConfig(
                "unlabeled document in training set".into(),
            )),
        })
        .collect::<Result<_, _>>()?;
    if !classes.contains(&SPAM) || !classes.contains(&HAM) {
        return Err(ClassifierError::SingleClass);
    }

    let doc_buckets: Vec<Vec<u64>> = docs.iter().map(|d| bucket_ids(d, bucket_count)).collect();
    let embed_seed = seed_for_index(cfg.seed, u64::MAX);
    let mut model = ShallowTextModel {
        embeddings: HashMap::new(),
        output_weights: vec![vec![0.0; dim]; CLASSES],
        output_bias: vec![0.0; CLASSES],
        dim,
        bucket_count,
        seed: embed_seed,
    };

    let mut order: Vec<usize> = (0..docs.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let total_steps = (cfg.epochs * docs.len()) as f64;
    let lambda = cfg.regularization;
    let mut step = 0usize;

    for _ in 0..cfg.epochs {
        if cfg.shuffle {
            order.shuffle(&mut rng);
        }
        for &i in &order {
            let eta = cfg.learning_rate * (1.0 - step as f64 / total_steps).max(1e-4);
            step += 1;
            let buckets = &doc_buckets[i];
            let pooled = model.pool(buckets);
            let mut logits = [0.0f64; CLASSES];
            for (c, logit) in logits.iter_mut().enumerate() {
                *logit = model.output_bias[c]
                    + model.output_weights[c]
                        .iter()
                        .zip(&pooled)
                        .map(|(w, h)| w * h)
                        .sum::<f64>();
            }
            let probs = softmax(logits);
            let mut dz = [0.0f64; CLASSES];
            for (c, (g, p)) in dz.iter_mut().zip(probs).enumerate() {
                *g = p - if classes[i] == c { 1.0 } else { 0.0 };
            }
            // Hidden gradient uses the pre-update output weights.
            let mut dh = vec![0.0f64; dim];
            for (&dz_c, weights) in dz.iter().zip(&model.output_weights) {
                for (g, w) in dh.iter_mut().zip(weights) {
                    *g += dz_c * w;
                }
            }
            for ((&dz_c, weights), bias) in dz
                .iter()
                .zip(&mut model.output_weights)
                .zip(&mut model.output_bias)
            {
                for (w, h) in weights.iter_mut().zip(&pooled) {
                    *w -= eta * (dz_c * h + lambda * *w);
                }
                *bias -= eta * dz_c;
            }
            if !buckets.is_empty() {
                let scale = eta / buckets.len() as f64;
                for &b in buckets {
                    let row = model
                        .embeddings
                        .entry(b)
                        .or_insert_with(|| init_vector(embed_seed, b, dim));
                    for (e, g) in row.iter_mut().zip(&dh) {
                        *e -= scale * g;
                    }
                }
            }
        }
    }

    Ok(model)
}
