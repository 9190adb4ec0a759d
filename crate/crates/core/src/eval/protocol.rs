//! The two-phase evaluation protocol: clean performance on the test split,
//! then adversarial robustness on the all-spam holdout with a baseline
//! column of unaltered messages.

use super::{compute_confusion, compute_metrics, ConfusionMatrix, EvalError, MetricsReport};
use crate::attacks::{apply_attack, AttackConfig, AttackKind, AttackResources};
use crate::classifiers::{Featurizer, ModelBundle, ModelKind};
use crate::corpus::{Corpus, Label};
use crate::derive_seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelEvaluation {
    pub confusion: ConfusionMatrix,
    pub metrics: MetricsReport,
}

/// Classify every record of a labeled corpus and aggregate the confusion
/// counts. Deterministic and order-invariant over records.
pub fn evaluate_model(
    classifier: &ModelKind,
    featurizer: &Featurizer,
    test: &Corpus,
) -> Result<ModelEvaluation, EvalError> {
    let bundle = ModelBundle::new("", classifier.clone(), featurizer.clone())?;
    evaluate_bundle(&bundle, test)
}

pub fn evaluate_bundle(bundle: &ModelBundle, test: &Corpus) -> Result<ModelEvaluation, EvalError> {
    bundle.check_compatibility()?;
    let mut predictions = Vec::with_capacity(test.len());
    let mut truth = Vec::with_capacity(test.len());
    for record in test.records() {
        if record.label == Label::Unlabeled {
            return Err(EvalError::UnlabeledRecord {
                id: record.id.clone(),
            });
        }
        predictions.push(bundle.classify_text(&record.text)?);
        truth.push(record.label);
    }
    let confusion = compute_confusion(&predictions, &truth)?;
    let metrics = compute_metrics(&confusion)?;
    Ok(ModelEvaluation { confusion, metrics })
}

/// One (model, column) cell of the robustness matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustnessCell {
    pub accuracy: f64,
    pub f1: Option<f64>,
    pub confusion: ConfusionMatrix,
}

impl RobustnessCell {
    fn from_confusion(confusion: ConfusionMatrix) -> Result<Self, EvalError> {
        let metrics = compute_metrics(&confusion)?;
        Ok(Self {
            accuracy: metrics.accuracy,
            f1: metrics.f1,
            confusion,
        })
    }
}

/// Per-model robustness results: the baseline column first, then one column
/// per attack in the requested order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessRow {
    pub feature_model: String,
    pub classifier: String,
    pub actual: RobustnessCell,
    pub attacks: Vec<(AttackKind, RobustnessCell)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessMatrix {
    pub rows: Vec<RobustnessRow>,
    pub attack_order: Vec<AttackKind>,
}

/// Run the adversarial protocol: pass the unaltered holdout through every
/// model for the baseline, then re-encode each attack's perturbed messages
/// and score those.
///
/// The holdout must be all spam, so accuracy equals spam recall. Per-record
/// attack seeds derive from (master seed, record id); per-model columns are
/// computed in parallel with results assembled in model order, making serial
/// and parallel runs identical.
pub fn robustness_eval(
    models: &[ModelBundle],
    holdout: &Corpus,
    attacks: &[AttackConfig],
    resources: &AttackResources,
    master_seed: u64,
) -> Result<RobustnessMatrix, EvalError> {
    for record in holdout.records() {
        if record.label != Label::Spam {
            return Err(EvalError::NonSpamHoldout {
                id: record.id.clone(),
                label: record.label.as_str().to_string(),
            });
        }
    }

    // Perturbed texts are model-independent; generate them once per attack.
    let mut attacked_texts: Vec<(AttackKind, Vec<String>)> = Vec::with_capacity(attacks.len());
    for cfg in attacks {
        let mut texts = Vec::with_capacity(holdout.len());
        for record in holdout.records() {
            let mut record_cfg = cfg.clone();
            record_cfg.seed = derive_seed(master_seed, &record.id);
            texts.push(apply_attack(&record.text, &record_cfg, resources)?.perturbed);
        }
        attacked_texts.push((cfg.kind, texts));
    }

    let truth = vec![Label::Spam; holdout.len()];
    let rows: Vec<Result<RobustnessRow, EvalError>> = models
        .par_iter()
        .map(|bundle| {
            let classify_all = |texts: &[String]| -> Result<RobustnessCell, EvalError> {
                let predictions = texts
                    .iter()
                    .map(|t| bundle.classify_text(t))
                    .collect::<Result<Vec<_>, _>>()?;
                RobustnessCell::from_confusion(compute_confusion(&predictions, &truth)?)
            };
            let originals: Vec<String> =
                holdout.records().iter().map(|r| r.text.clone()).collect();
            let actual = classify_all(&originals)?;
            let mut attack_cells = Vec::with_capacity(attacked_texts.len());
            for (kind, texts) in &attacked_texts {
                attack_cells.push((*kind, classify_all(texts)?));
            }
            Ok(RobustnessRow {
                feature_model: bundle.featurizer.label(),
                classifier: bundle.classifier.kind_tag().to_string(),
                actual,
                attacks: attack_cells,
            })
        })
        .collect();

    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(RobustnessMatrix {
        rows,
        attack_order: attacks.iter().map(|a| a.kind).collect(),
    })
}
