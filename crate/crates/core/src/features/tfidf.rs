//! TF-IDF weighting over an n-gram vocabulary.
//!
//! Uses the smoothed inverse document frequency
//! `idf(t) = ln((1 + N) / (1 + df(t))) + 1` with optional L2 document
//! normalization, the conventional default of mainstream vectorizers.

use super::{ngrams, tokenize, SparseVector, TokenizerConfig, Vocabulary};
use crate::corpus::Corpus;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalize {
    None,
    L2,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TfIdfModel {
    vocabulary: Vocabulary,
    idf: Vec<f64>,
    document_count: usize,
    normalize: Normalize,
}

impl TfIdfModel {
    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn idf(&self, term: &str) -> Option<f64> {
        self.vocabulary.index_of(term).map(|i| self.idf[i])
    }

    pub fn document_count(&self) -> usize {
        self.document_count
    }

    pub fn dimension(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn normalize(&self) -> Normalize {
        self.normalize
    }
}

/// Fit idf weights for every vocabulary term over the corpus.
pub fn tfidf_fit(
    corpus: &Corpus,
    vocab: &Vocabulary,
    cfg: &TokenizerConfig,
) -> TfIdfModel {
    tfidf_fit_normalized(corpus, vocab, cfg, Normalize::L2)
}

pub fn tfidf_fit_normalized(
    corpus: &Corpus,
    vocab: &Vocabulary,
    cfg: &TokenizerConfig,
    normalize: Normalize,
) -> TfIdfModel {
    let mut df = vec![0usize; vocab.len()];
    let n_docs = corpus.len();
    for record in corpus.records() {
        let tokens = tokenize(&record.text, cfg);
        let mut seen: Vec<usize> = ngrams(&tokens, vocab.ngram_order())
            .into_iter()
            .filter_map(|g| vocab.index_of(&g))
            .collect();
        seen.sort_unstable();
        seen.dedup();
        for i in seen {
            df[i] += 1;
        }
    }
    let idf = df
        .iter()
        .map(|&d| ((1.0 + n_docs as f64) / (1.0 + d as f64)).ln() + 1.0)
        .collect();
    TfIdfModel {
        vocabulary: vocab.clone(),
        idf,
        document_count: n_docs,
        normalize,
    }
}

/// Weight a token sequence: raw term count times idf, then L2-normalized
/// unless the vector is all-zero or normalization is off.
pub fn tfidf_transform(model: &TfIdfModel, tokens: &[String]) -> SparseVector {
    let mut counts = super::count_vectorize(tokens, &model.vocabulary);
    let weighted: Vec<(usize, f64)> = counts
        .entries()
        .iter()
        .map(|&(i, tf)| (i, tf * model.idf[i]))
        .collect();
    counts = SparseVector::new(model.vocabulary.len(), weighted);
    if model.normalize == Normalize::L2 {
        let norm = counts.l2_norm();
        if norm > 0.0 {
            counts.scale(1.0 / norm);
        }
    }
    counts
}
