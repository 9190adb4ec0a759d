//! Linear one-class model for novelty detection, trained on a single class.
//!
//! SGD on the canonical objective (1/2)||w||^2 - rho + (1/nu) max(0, rho -
//! w.x), whose optimum puts roughly a nu fraction of training points outside
//! (score < 0). The regularizer strength is fixed at one by that objective,
//! so `cfg.regularization` is not consulted here. After SGD settles w, rho
//! is refit in closed form: the minimizer of the objective in rho alone is
//! the nu-quantile of the training scores.

use super::{ClassifierError, FeatureVector, TrainConfig};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneClassModel {
    weights: Vec<f64>,
    offset: f64,
    nu: f64,
}

impl OneClassModel {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The decision threshold rho.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    /// Decision-function value `w . x - rho`; negative means outlier.
    pub fn score(&self, x: &impl FeatureVector) -> Result<f64, ClassifierError> {
        if x.dim() != self.weights.len() {
            return Err(ClassifierError::DimensionMismatch {
                expected: self.weights.len(),
                found: x.dim(),
            });
        }
        Ok(x.dot(&self.weights) - self.offset)
    }
}

/// Fit (w, rho) on positive-class vectors only.
pub fn train_one_class<V: FeatureVector>(
    features: &[V],
    nu: f64,
    cfg: &TrainConfig,
) -> Result<OneClassModel, ClassifierError> {
    cfg.validate()?;
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(ClassifierError::InvalidNu(nu));
    }
    if features.len() < 2 {
        return Err(ClassifierError::TooFewSamples(features.len()));
    }
    let dim = features[0].dim();
    for x in features {
        if x.dim() != dim {
            return Err(ClassifierError::DimensionMismatch {
                expected: dim,
                found: x.dim(),
            });
        }
    }

    let mut w = vec![0.0f64; dim];
    let mut rho = 0.0f64;
    let mut order: Vec<usize> = (0..features.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let eta0 = cfg.learning_rate;
    let lambda = 1.0;
    let inv_nu = 1.0 / nu;
    let mut t: u64 = 0;

    for _ in 0..cfg.epochs {
        if cfg.shuffle {
            order.shuffle(&mut rng);
        }
        for &i in &order {
            t += 1;
            let eta = eta0 / (1.0 + lambda * eta0 * t as f64);
            let x = &features[i];
            let z = x.dot(&w);
            let shrink = 1.0 - eta * lambda;
            for wj in &mut w {
                *wj *= shrink;
            }
            if z < rho {
                x.for_each(|j, xv| w[j] += eta * inv_nu * xv);
                rho -= eta * (inv_nu - 1.0);
            } else {
                rho += eta;
            }
        }
    }

    // Closed-form rho refit: with w fixed, the objective is minimized where
    // #{w.x_i <= rho} = ceil(nu * n), i.e. rho is the k-th smallest score.
    let mut scores: Vec<f64> = features.iter().map(|x| x.dot(&w)).collect();
    scores.sort_by(|a, b| a.partial_cmp(b).expect("finite scores"));
    let k = ((nu * scores.len() as f64).ceil() as usize).clamp(1, scores.len());
    rho = scores[k - 1];

    Ok(OneClassModel {
        weights: w,
        offset: rho,
        nu,
    })
}
