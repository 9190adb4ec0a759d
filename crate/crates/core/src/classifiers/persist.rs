//! Trained-model persistence: a self-describing container holding a version
//! tag, a model-kind tag, the feature-space descriptor, and the weights plus
//! the featurizer needed to score raw text.

use super::{
    classify_probability, classify_score, ClassifierError, LinearModel, OneClassModel,
    PuBaggingModel, ShallowTextModel,
};
use crate::corpus::Label;
use crate::features::{
    embed_message, tfidf_transform, tokenize, EmbeddingTable, TfIdfModel, TokenizerConfig,
};
use serde::{Deserialize, Serialize};
use std::path::Path;

const FORMAT_VERSION: u32 = 1;

/// A trained classifier of any family.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum ModelKind {
    Linear(LinearModel),
    OneClass(OneClassModel),
    PuBagging(PuBaggingModel),
    ShallowText(ShallowTextModel),
}

impl ModelKind {
    pub fn kind_tag(&self) -> &'static str {
        match self {
            ModelKind::Linear(_) => "linear",
            ModelKind::OneClass(_) => "one-class",
            ModelKind::PuBagging(_) => "pu-bagging",
            ModelKind::ShallowText(_) => "shallow-text",
        }
    }
}

/// Maps raw text into the feature space a classifier was trained on.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "features", rename_all = "kebab-case")]
pub enum Featurizer {
    TfIdf {
        tokenizer: TokenizerConfig,
        model: TfIdfModel,
    },
    Embedding {
        tokenizer: TokenizerConfig,
        table: EmbeddingTable,
    },
    /// Pass tokens straight through; used by the shallow text model, which
    /// embeds internally.
    Tokens { tokenizer: TokenizerConfig },
}

impl Featurizer {
    pub fn tokenizer(&self) -> &TokenizerConfig {
        match self {
            Featurizer::TfIdf { tokenizer, .. }
            | Featurizer::Embedding { tokenizer, .. }
            | Featurizer::Tokens { tokenizer } => tokenizer,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Featurizer::TfIdf { tokenizer, .. } => match tokenizer.ngram_order {
                1 => "bow-tfidf".to_string(),
                n => format!("{n}gram-tfidf"),
            },
            Featurizer::Embedding { table, .. } => format!("embedding-{}d", table.dimension()),
            Featurizer::Tokens { .. } => "hashed-text".to_string(),
        }
    }
}

/// Descriptor of the feature space a model consumes; recomputed at load time
/// and compared against the stored copy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "kebab-case")]
pub enum FeatureSpace {
    SparseVocab { vocab_hash: String, dimension: usize },
    DenseEmbedding { dimension: usize },
    HashedText { bucket_count: usize, dimension: usize },
}

/// A classifier paired with its featurizer; the unit that is saved, loaded,
/// and evaluated.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelBundle {
    pub name: String,
    pub classifier: ModelKind,
    pub featurizer: Featurizer,
}

impl ModelBundle {
    /// Pair a classifier with its featurizer, checking dimensional
    /// compatibility.
    pub fn new(
        name: impl Into<String>,
        classifier: ModelKind,
        featurizer: Featurizer,
    ) -> Result<Self, ClassifierError> {
        let bundle = Self {
            name: name.into(),
            classifier,
            featurizer,
        };
        bundle.check_compatibility()?;
        Ok(bundle)
    }

    pub fn check_compatibility(&self) -> Result<(), ClassifierError> {
        let mismatch = |expected: usize, found: usize| {
            Err(ClassifierError::DimensionMismatch { expected, found })
        };
        let feature_dim = match &self.featurizer {
            Featurizer::TfIdf { model, .. } => Some(model.dimension()),
            Featurizer::Embedding { table, .. } => Some(table.dimension()),
            Featurizer::Tokens { .. } => None,
        };
        match (&self.classifier, feature_dim) {
            (ModelKind::Linear(m), Some(d)) if m.dimension() != d => mismatch(m.dimension(), d),
            (ModelKind::OneClass(m), Some(d)) if m.dimension() != d => mismatch(m.dimension(), d),
            (ModelKind::PuBagging(m), Some(d)) if m.dimension() != d => mismatch(m.dimension(), d),
            (ModelKind::ShallowText(_), None) => Ok(()),
            (ModelKind::ShallowText(_), Some(_)) => Err(ClassifierError::InvalidConfig(
                "shallow-text models take raw tokens, not vector features".into(),
            )),
            (_, None) => Err(ClassifierError::InvalidConfig(
                "vector models need a tf-idf or embedding featurizer".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn feature_space(&self) -> FeatureSpace {
        match (&self.featurizer, &self.classifier) {
            (Featurizer::TfIdf { model, .. }, _) => FeatureSpace::SparseVocab {
                vocab_hash: format!("{:016x}", model.vocabulary().content_hash()),
                dimension: model.dimension(),
            },
            (Featurizer::Embedding { table, .. }, _) => FeatureSpace::DenseEmbedding {
                dimension: table.dimension(),
            },
            (Featurizer::Tokens { .. }, ModelKind::ShallowText(m)) => FeatureSpace::HashedText {
                bucket_count: m.bucket_count(),
                dimension: m.dimension(),
            },
            (Featurizer::Tokens { .. }, _) => FeatureSpace::HashedText {
                bucket_count: 0,
                dimension: 0,
            },
        }
    }

    /// Decision value for a message: margin for the vector models, spam
    /// probability minus one half for the shallow text model. Positive means
    /// Spam under either convention.
    pub fn score_text(&self, text: &str) -> Result<f64, ClassifierError> {
        let tokens = tokenize(text, self.featurizer.tokenizer());
        match (&self.classifier, &self.featurizer) {
            (ModelKind::Linear(m), Featurizer::TfIdf { model, .. }) => {
                m.score(&tfidf_transform(model, &tokens))
            }
            (ModelKind::Linear(m), Featurizer::Embedding { table, .. }) => {
                m.score(&embed_message(&tokens, table))
            }
            (ModelKind::OneClass(m), Featurizer::TfIdf { model, .. }) => {
                m.score(&tfidf_transform(model, &tokens))
            }
            (ModelKind::OneClass(m), Featurizer::Embedding { table, .. }) => {
                m.score(&embed_message(&tokens, table))
            }
            (ModelKind::PuBagging(m), Featurizer::TfIdf { model, .. }) => {
                m.score(&tfidf_transform(model, &tokens))
            }
            (ModelKind::PuBagging(m), Featurizer::Embedding { table, .. }) => {
                m.score(&embed_message(&tokens, table))
            }
            (ModelKind::ShallowText(m), Featurizer::Tokens { .. }) => {
                Ok(m.predict_spam_probability(&tokens) - 0.5)
            }
            _ => Err(ClassifierError::InvalidConfig(
                "incompatible classifier/featurizer pairing".into(),
            )),
        }
    }

    /// Classify a message through the model's documented threshold.
    pub fn classify_text(&self, text: &str) -> Result<Label, ClassifierError> {
        match &self.classifier {
            ModelKind::ShallowText(m) => {
                let tokens = tokenize(text, self.featurizer.tokenizer());
                Ok(classify_probability(m.predict_spam_probability(&tokens)))
            }
            _ => Ok(classify_score(self.score_text(text)?)),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    kind: String,
    feature_space: FeatureSpace,
    bundle: ModelBundle,
}

pub fn save_model(bundle: &ModelBundle, path: &Path) -> Result<(), ClassifierError> {
    let file = ModelFile {
        format_version: FORMAT_VERSION,
        kind: bundle.classifier.kind_tag().to_string(),
        feature_space: bundle.feature_space(),
        bundle: bundle.clone(),
    };
    let json = serde_json::to_string(&file).map_err(|e| ClassifierError::Persist {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    std::fs::write(path, json).map_err(|source| ClassifierError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_model(path: &Path) -> Result<ModelBundle, ClassifierError> {
    let json = std::fs::read_to_string(path).map_err(|source| ClassifierError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: ModelFile = serde_json::from_str(&json).map_err(|e| ClassifierError::Persist {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    if file.format_version != FORMAT_VERSION {
        return Err(ClassifierError::Persist {
            path: path.display().to_string(),
            reason: format!(
                "unsupported format version {} (expected {FORMAT_VERSION})",
                file.format_version
            ),
        });
    }
    if file.kind != file.bundle.classifier.kind_tag() {
        return Err(ClassifierError::Persist {
            path: path.display().to_string(),
            reason: format!(
                "kind tag {:?} does not match payload {:?}",
                file.kind,
                file.bundle.classifier.kind_tag()
            ),
        });
    }
    if file.feature_space != file.bundle.feature_space() {
        return Err(ClassifierError::Persist {
            path: path.display().to_string(),
            reason: "feature-space descriptor does not match the payload".into(),
        });
    }
    file.bundle.check_compatibility().map_err(|e| ClassifierError::Persist {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    Ok(file.bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::{train_linear, Loss, TrainConfig};
    use crate::corpus::{Corpus, SmsRecord};
    use crate::features::{build_vocabulary, tfidf_fit};

    fn tiny_bundle() -> ModelBundle {
        let cfg = TokenizerConfig::bare();
        let corpus = Corpus::from_records(
            "t",
            [
                SmsRecord::new("1", "win cash now", Label::Spam, "t"),
                SmsRecord::new("2", "dinner tonight ok", Label::Ham, "t"),
                SmsRecord::new("3", "win prize cash", Label::Spam, "t"),
                SmsRecord::new("4", "see dinner friends", Label::Ham, "t"),
            ],
        )
        .unwrap();
        let vocab = build_vocabulary(&corpus, &cfg, 1).unwrap();
        let tfidf = tfidf_fit(&corpus, &vocab, &cfg);
        let features: Vec<_> = corpus
            .records()
            .iter()
            .map(|r| tfidf_transform(&tfidf, &tokenize(&r.text, &cfg)))
            .collect();
        let labels: Vec<i8> = corpus
            .records()
            .iter()
            .map(|r| if r.label == Label::Spam { 1 } else { -1 })
            .collect();
        let model = train_linear(&features, &labels, Loss::Hinge, &TrainConfig::default()).unwrap();
        ModelBundle::new(
            "tiny",
            ModelKind::Linear(model),
            Featurizer::TfIdf {
                tokenizer: cfg,
                model: tfidf,
            },
        )
        .unwrap()
    }

    #[test]
    fn save_load_roundtrip_preserves_behavior() {
        let bundle = tiny_bundle();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.bin");
        save_model(&bundle, &path).unwrap();
        let loaded = load_model(&path).unwrap();
        for text in ["win cash now", "dinner tonight ok", "unknown words"] {
            assert_eq!(
                bundle.score_text(text).unwrap(),
                loaded.score_text(text).unwrap()
            );
            assert_eq!(
                bundle.classify_text(text).unwrap(),
                loaded.classify_text(text).unwrap()
            );
        }
    }

    #[test]
    fn tampered_feature_space_is_rejected() {
        let bundle = tiny_bundle();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.bin");
        save_model(&bundle, &path).unwrap();
        // Corrupt the recorded vocab hash; the JSON stays valid so the load
        // must fail on the descriptor comparison itself.
        let json = std::fs::read_to_string(&path).unwrap();
        let tampered = json.replacen("\"vocab_hash\":\"", "\"vocab_hash\":\"00ff", 1);
        assert_ne!(tampered, json);
        std::fs::write(&path, tampered).unwrap();
        match load_model(&path) {
            Err(ClassifierError::Persist { reason, .. }) => {
                assert!(reason.contains("descriptor"), "got {reason}")
            }
            other => panic!("expected a descriptor mismatch, got {other:?}"),
        }
    }

    #[test]
    fn mismatched_pairing_is_rejected_at_construction() {
        let bundle = tiny_bundle();
        let ModelKind::Linear(model) = bundle.classifier else {
            unreachable!()
        };
        let table = EmbeddingTable::new(3, 1, 0.1); // wrong dimension
        let err = ModelBundle::new(
            "bad",
            ModelKind::Linear(model),
            Featurizer::Embedding {
                tokenizer: TokenizerConfig::bare(),
                table,
            },
        );
        assert!(matches!(err, Err(ClassifierError::DimensionMismatch { .. })));
    }

    #[test]
    fn classification_threshold_is_spam_positive() {
        let bundle = tiny_bundle();
        assert_eq!(bundle.classify_text("win cash now").unwrap(), Label::Spam);
        assert_eq!(bundle.classify_text("dinner tonight ok").unwrap(), Label::Ham);
    }

    fn all_family_bundles() -> Vec<ModelBundle> {
        use crate::classifiers::{
            train_one_class, train_pu_bagging, train_shallow_text,
        };
        let cfg = TokenizerConfig::bare();
        let texts = [
            ("1", "win cash now", Label::Spam),
            ("2", "dinner tonight ok", Label::Ham),
            ("3", "win prize cash today", Label::Spam),
            ("4", "see dinner friends later", Label::Ham),
            ("5", "claim cash prize win", Label::Spam),
            ("6", "thanks dinner was fun", Label::Ham),
        ];
        let corpus = Corpus::from_records(
            "t",
            texts.map(|(id, t, l)| SmsRecord::new(id, t, l, "t")),
        )
        .unwrap();
        let vocab = build_vocabulary(&corpus, &cfg, 1).unwrap();
        let tfidf = tfidf_fit(&corpus, &vocab, &cfg);
        let features: Vec<_> = corpus
            .records()
            .iter()
            .map(|r| tfidf_transform(&tfidf, &tokenize(&r.text, &cfg)))
            .collect();
        let spam: Vec<_> = features
            .iter()
            .zip(corpus.records())
            .filter(|(_, r)| r.label == Label::Spam)
            .map(|(f, _)| f.clone())
            .collect();
        let ham: Vec<_> = features
            .iter()
            .zip(corpus.records())
            .filter(|(_, r)| r.label == Label::Ham)
            .map(|(f, _)| f.clone())
            .collect();
        let train_cfg = TrainConfig::default().with_seed(5);
        let tfidf_featurizer = |tfidf: &TfIdfModel| Featurizer::TfIdf {
            tokenizer: cfg.clone(),
            model: tfidf.clone(),
        };
        let labels: Vec<i8> = corpus
            .records()
            .iter()
            .map(|r| if r.label == Label::Spam { 1 } else { -1 })
            .collect();
        let docs: Vec<Vec<String>> = corpus
            .records()
            .iter()
            .map(|r| tokenize(&r.text, &cfg))
            .collect();
        let doc_labels: Vec<Label> = corpus.records().iter().map(|r| r.label).collect();

        let mut table = EmbeddingTable::new(4, 3, 0.1);
        table.insert("win", vec![1.0, 0.5, 0.0, 0.0]);
        table.insert("dinner", vec![-1.0, 0.0, 0.5, 0.0]);
        let dense: Vec<Vec<f64>> = corpus
            .records()
            .iter()
            .map(|r| crate::features::embed_message(&tokenize(&r.text, &cfg), &table))
            .collect();

        vec![
            ModelBundle::new(
                "linear",
                ModelKind::Linear(
                    train_linear(&features, &labels, Loss::Hinge, &train_cfg).unwrap(),
                ),
                tfidf_featurizer(&tfidf),
            )
            .unwrap(),
            ModelBundle::new(
                "oneclass",
                ModelKind::OneClass(train_one_class(&spam, 0.5, &train_cfg).unwrap()),
                tfidf_featurizer(&tfidf),
            )
            .unwrap(),
            ModelBundle::new(
                "pu",
                ModelKind::PuBagging(train_pu_bagging(&spam, &ham, 5, &train_cfg).unwrap()),
                tfidf_featurizer(&tfidf),
            )
            .unwrap(),
            ModelBundle::new(
                "shallow",
                ModelKind::ShallowText(
                    train_shallow_text(&docs, &doc_labels, 4, 128, &train_cfg).unwrap(),
                ),
                Featurizer::Tokens {
                    tokenizer: cfg.clone(),
                },
            )
            .unwrap(),
            ModelBundle::new(
                "embedding",
                ModelKind::Linear(
                    train_linear(&dense, &labels, Loss::Hinge, &train_cfg).unwrap(),
                ),
                Featurizer::Embedding {
                    tokenizer: cfg.clone(),
                    table,
                },
            )
            .unwrap(),
        ]
    }

    #[test]
    fn every_model_family_roundtrips_and_is_byte_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        for (i, bundle) in all_family_bundles().into_iter().enumerate() {
            let path = dir.path().join(format!("m{i}.bin"));
            save_model(&bundle, &path).unwrap();
            let first = std::fs::read(&path).unwrap();
            save_model(&bundle, &path).unwrap();
            assert_eq!(
                first,
                std::fs::read(&path).unwrap(),
                "{}: model file must serialize byte-identically",
                bundle.name
            );
            let loaded = load_model(&path).unwrap();
            for text in ["win cash now", "dinner tonight ok", "brand new words"] {
                assert_eq!(
                    bundle.score_text(text).unwrap(),
                    loaded.score_text(text).unwrap(),
                    "{}: score drifted across save/load",
                    bundle.name
                );
            }
        }
    }
}
