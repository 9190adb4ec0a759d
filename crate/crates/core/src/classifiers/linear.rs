//! Regularized linear classifier trained by seeded SGD.
//!
//! Hinge loss gives the linear SVM; logistic loss is available behind the
//! same interface. The learning rate follows eta_t = eta0 / (1 + lambda *
//! eta0 * t), and the L2 shrink is carried in a scale factor so each step
//! costs O(nnz) on sparse inputs.

use super::{ClassifierError, FeatureVector, TrainConfig};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Loss {
    Hinge,
    Logistic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    weights: Vec<f64>,
    bias: f64,
    loss: Loss,
    trained_epochs: usize,
}

impl LinearModel {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn loss(&self) -> Loss {
        self.loss
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    pub fn trained_epochs(&self) -> usize {
        self.trained_epochs
    }

    /// Decision-function value `w . x + b`.
    pub fn score(&self, x: &impl FeatureVector) -> Result<f64, ClassifierError> {
        if x.dim() != self.weights.len() {
            return Err(ClassifierError::DimensionMismatch {
                expected: self.weights.len(),
                found: x.dim(),
            });
        }
        Ok(x.dot(&self.weights) + self.bias)
    }
}

/// Decision-function value of a linear model (free-function form).
pub fn predict_score(model: &LinearModel, x: &impl FeatureVector) -> Result<f64, ClassifierError> {
    model.score(x)
}

/// Train on +/-1 labels by seeded SGD over the regularized loss.
/// Both classes must be present; identical data, config, and seed give
/// bit-identical weights.
pub fn train_linear<V: FeatureVector>(
    features: &[V],
    labels: &[i8],
    loss: Loss,
    cfg: &TrainConfig,
) -> Result<LinearModel, ClassifierError> {
    cfg.validate()?;
    if features.len() != labels.len() {
        return Err(ClassifierError::LengthMismatch {
            features: features.len(),
            labels: labels.len(),
        });
    }
    if features.len() < 2 {
        return Err(ClassifierError::TooFewSamples(features.len()));
    }
    if let Some(bad) = labels.iter().find(|&&y| y != 1 && y != -1) {
        return Err(ClassifierError::InvalidConfig(format!(
            "labels must be +1 or -1, got {bad}"
        )));
    }
    if !labels.contains(&1) || !labels.contains(&-1) {
        return Err(ClassifierError::SingleClass);
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

    let mut v = vec![0.0f64; dim];
    let mut scale = 1.0f64;
    let mut bias = 0.0f64;
    let mut order: Vec<usize> = (0..features.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let eta0 = cfg.learning_rate;
    let lambda = cfg.regularization;
    let mut t: u64 = 0;

    for _ in 0..cfg.epochs {
        if cfg.shuffle {
            order.shuffle(&mut rng);
        }
        for &i in &order {
            t += 1;
            let eta = eta0 / (1.0 + lambda * eta0 * t as f64);
            let x = &features[i];
            let y = f64::from(labels[i]);
            let z = scale * x.dot(&v) + bias;
            // L2 shrink, folded into the scale factor.
            if lambda > 0.0 {
                scale *= 1.0 - eta * lambda;
                if scale < 1e-9 {
                    for w in &mut v {
                        *w *= scale;
                    }
                    scale = 1.0;
                }
            }
            let step = match loss {
                Loss::Hinge => {
                    if y * z < 1.0 {
                        eta * y
                    } else {
                        0.0
                    }
                }
                Loss::Logistic => {
                    let sig = 1.0 / (1.0 + (y * z).exp());
                    eta * y * sig
                }
            };
            if step != 0.0 {
                let inv = step / scale;
                x.for_each(|j, xv| v[j] += inv * xv);
                bias += step;
            }
        }
    }

    let weights = v.into_iter().map(|w| w * scale).collect();
    Ok(LinearModel {
        weights,
        bias,
        loss,
        trained_epochs: cfg.epochs,
    })
}

#[cfg(test)]
pub(crate) mod test_oracle {
    //! Perceptron used as an independent separability oracle in tests.
    use super::FeatureVector;

    /// Run the classic perceptron; returns the weights/bias if the set is
    /// linearly separable within the sweep budget, else None.
    pub fn perceptron<V: FeatureVector>(
        features: &[V],
        labels: &[i8],
        max_sweeps: usize,
    ) -> Option<(Vec<f64>, f64)> {
        let dim = features[0].dim();
        let mut w = vec![0.0f64; dim];
        let mut b = 0.0f64;
        for _ in 0..max_sweeps {
            let mut mistakes = 0;
            for (x, &y) in features.iter().zip(labels) {
                let y = f64::from(y);
                if y * (x.dot(&w) + b) <= 0.0 {
                    x.for_each(|j, xv| w[j] += y * xv);
                    b += y;
                    mistakes += 1;
                }
            }
            if mistakes == 0 {
                return Some((w, b));
            }
        }
        None
    }
}
