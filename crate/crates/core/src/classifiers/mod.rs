//! Shallow classifier families: two-class linear SVM, linear one-class
//! model, PU-bagging ensemble, and a hashed-n-gram shallow text classifier.
//!
//! Every trainer is deterministic given (data, config, seed); trained models
//! are immutable and safe to share across threads.

mod linear;
mod one_class;
mod persist;
mod pu;
mod shallow_text;

pub use linear::{predict_score, train_linear, LinearModel, Loss};
pub use one_class::{train_one_class, OneClassModel};
pub use persist::{load_model, save_model, FeatureSpace, Featurizer, ModelBundle, ModelKind};
pub use pu::{train_pu_bagging, OobScore, PuBaggingModel};
pub use shallow_text::{train_shallow_text, ShallowTextModel, DEFAULT_BUCKET_COUNT};

use crate::corpus::Label;
use crate::features::SparseVector;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("training needs both classes, got only one")]
    SingleClass,
    #[error("training set is empty or too small ({0} samples)")]
    TooFewSamples(usize),
    #[error("feature dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("features and labels differ in length ({features} vs {labels})")]
    LengthMismatch { features: usize, labels: usize },
    #[error("nu must be in (0,1], got {0}")]
    InvalidNu(f64),
    #[error("{0}")]
    InvalidConfig(String),
    #[error("model file {path}: {reason}")]
    Persist { path: String, reason: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Training hyperparameters shared by the SGD trainers.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    /// L2 regularization strength.
    pub regularization: f64,
    pub seed: u64,
    pub shuffle: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 20,
            learning_rate: 0.1,
            regularization: 1e-4,
            seed: 0,
            shuffle: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), ClassifierError> {
        if self.epochs < 1 {
            return Err(ClassifierError::InvalidConfig("epochs must be >= 1".into()));
        }
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return Err(ClassifierError::InvalidConfig(
                "learning_rate must be > 0".into(),
            ));
        }
        if self.regularization < 0.0 {
            return Err(ClassifierError::InvalidConfig(
                "regularization must be >= 0".into(),
            ));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Anything usable as a feature vector by the linear trainers: a sparse
/// vector or a plain dense slice.
pub trait FeatureVector {
    fn dim(&self) -> usize;
    fn dot(&self, weights: &[f64]) -> f64;
    /// Visit every (potentially) non-zero entry.
    fn for_each(&self, f: impl FnMut(usize, f64));
}

impl FeatureVector for SparseVector {
    fn dim(&self) -> usize {
        self.dimension()
    }
    fn dot(&self, weights: &[f64]) -> f64 {
        self.dot_dense(weights)
    }
    fn for_each(&self, mut f: impl FnMut(usize, f64)) {
        for &(i, v) in self.entries() {
            f(i, v);
        }
    }
}

impl FeatureVector for Vec<f64> {
    fn dim(&self) -> usize {
        self.len()
    }
    fn dot(&self, weights: &[f64]) -> f64 {
        self.iter().zip(weights).map(|(a, b)| a * b).sum()
    }
    fn for_each(&self, mut f: impl FnMut(usize, f64)) {
        for (i, &v) in self.iter().enumerate() {
            f(i, v);
        }
    }
}

impl FeatureVector for &[f64] {
    fn dim(&self) -> usize {
        self.len()
    }
    fn dot(&self, weights: &[f64]) -> f64 {
        self.iter().zip(weights).map(|(a, b)| a * b).sum()
    }
    fn for_each(&self, mut f: impl FnMut(usize, f64)) {
        for (i, &v) in self.iter().enumerate() {
            f(i, v);
        }
    }
}

impl<T: FeatureVector> FeatureVector for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn dot(&self, weights: &[f64]) -> f64 {
        (**self).dot(weights)
    }
    fn for_each(&self, f: impl FnMut(usize, f64)) {
        (**self).for_each(f)
    }
}

/// Map a margin score to a class: positive is Spam, zero ties to Ham.
pub fn classify_score(score: f64) -> Label {
    if score > 0.0 {
        Label::Spam
    } else {
        Label::Ham
    }
}

/// Map a spam probability to a class: the 0.5 tie goes to Ham.
pub fn classify_probability(p_spam: f64) -> Label {
    if p_spam > 0.5 {
        Label::Spam
    } else {
        Label::Ham
    }
}
