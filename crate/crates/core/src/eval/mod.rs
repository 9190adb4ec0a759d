//! Confusion matrices and the precision/recall/F1/accuracy metrics, with
//! Spam as the positive class throughout.

mod protocol;
mod report;

pub use protocol::{
    evaluate_bundle, evaluate_model, robustness_eval, ModelEvaluation, RobustnessCell,
    RobustnessMatrix, RobustnessRow,
};
pub use report::{
    parse_performance_csv, parse_robustness_csv, render_performance, render_robustness,
    PerformanceRow, ReportFormat,
};

use crate::attacks::AttackError;
use crate::classifiers::ClassifierError;
use crate::corpus::Label;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("predictions and truth differ in length ({predictions} vs {truth})")]
    LengthMismatch { predictions: usize, truth: usize },
    #[error("cannot evaluate an empty sequence")]
    EmptyInput,
    #[error("record {id} is unlabeled")]
    UnlabeledRecord { id: String },
    #[error("confusion matrix has no counts")]
    AllZeroMatrix,
    #[error("holdout must be all spam, found {label} record {id}")]
    NonSpamHoldout { id: String, label: String },
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error(transparent)]
    Attack(#[from] AttackError),
    #[error("report parse error: {0}")]
    Report(String),
}

/// TP/FP/TN/FN counts. Spam is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
}

impl ConfusionMatrix {
    /// Counts in (tp, fp, tn, fn) order.
    pub fn new(tp: usize, fp: usize, tn: usize, fn_count: usize) -> Self {
        Self {
            true_positives: tp,
            false_positives: fp,
            true_negatives: tn,
            false_negatives: fn_count,
        }
    }

    pub fn total(&self) -> usize {
        self.true_positives + self.false_positives + self.true_negatives + self.false_negatives
    }

    /// Actual positives P = TP + FN.
    pub fn positives(&self) -> usize {
        self.true_positives + self.false_negatives
    }

    /// Actual negatives N = TN + FP.
    pub fn negatives(&self) -> usize {
        self.true_negatives + self.false_positives
    }
}

/// Metric values in [0,1]; `None` is the Undefined outcome rendered as "-".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub accuracy: f64,
}

/// Count agreement between predicted and true labels. Both sequences must be
/// fully labeled and of equal, non-zero length.
pub fn compute_confusion(
    predictions: &[Label],
    truth: &[Label],
) -> Result<ConfusionMatrix, EvalError> {
    if predictions.len() != truth.len() {
        return Err(EvalError::LengthMismatch {
            predictions: predictions.len(),
            truth: truth.len(),
        });
    }
    if predictions.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let mut cm = ConfusionMatrix::new(0, 0, 0, 0);
    for (i, (p, t)) in predictions.iter().zip(truth).enumerate() {
        match (p, t) {
            (Label::Unlabeled, _) | (_, Label::Unlabeled) => {
                return Err(EvalError::UnlabeledRecord {
                    id: format!("index {i}"),
                })
            }
            (Label::Spam, Label::Spam) => cm.true_positives += 1,
            (Label::Spam, Label::Ham) => cm.false_positives += 1,
            (Label::Ham, Label::Ham) => cm.true_negatives += 1,
            (Label::Ham, Label::Spam) => cm.false_negatives += 1,
        }
    }
    Ok(cm)
}

/// Precision, recall, F1, and accuracy from a confusion matrix.
///
/// Division-by-zero metrics are Undefined rather than coerced to zero:
/// precision when there are no predicted positives, recall when there are no
/// actual positives, and F1 when either is Undefined or both are zero.
/// Precision is also Undefined when the positive class is absent entirely,
/// so report cells can render them as dashes. Accuracy is always defined.
pub fn compute_metrics(cm: &ConfusionMatrix) -> Result<MetricsReport, EvalError> {
    let total = cm.total();
    if total == 0 {
        return Err(EvalError::AllZeroMatrix);
    }
    let tp = cm.true_positives as f64;
    let predicted_pos = cm.true_positives + cm.false_positives;
    let actual_pos = cm.positives();

    let recall = (actual_pos > 0).then(|| tp / actual_pos as f64);
    let precision = (predicted_pos > 0 && actual_pos > 0).then(|| tp / predicted_pos as f64);
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        _ => None,
    };
    let accuracy = (cm.true_positives + cm.true_negatives) as f64 / total as f64;

    Ok(MetricsReport {
        precision,
        recall,
        f1,
        accuracy,
    })
}
