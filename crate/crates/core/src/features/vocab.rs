//! Bag-of-words / n-gram vocabulary and sparse count vectors.

use super::{tokenize, FeaturesError, TokenizerConfig};
use crate::corpus::Corpus;
use crate::fnv1a_64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// Sparse feature vector: strictly increasing in-bounds indices, finite values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    dimension: usize,
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    /// Build from (index, value) pairs in any order; duplicate indices are
    /// summed. Panics on out-of-bounds indices or non-finite values.
    pub fn new(dimension: usize, mut entries: Vec<(usize, f64)>) -> Self {
        entries.sort_unstable_by_key(|&(i, _)| i);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            assert!(i < dimension, "index {i} out of bounds for dimension {dimension}");
            assert!(v.is_finite(), "non-finite value at index {i}");
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += v,
                _ => merged.push((i, v)),
            }
        }
        Self { dimension, entries: merged }
    }

    pub fn empty(dimension: usize) -> Self {
        Self { dimension, entries: Vec::new() }
    }

    /// Dense slice converted to sparse form (zeros kept out).
    pub fn from_dense(values: &[f64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i, *v))
            .collect();
        Self::new(values.len(), entries)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v * v).sum::<f64>().sqrt()
    }

    /// Scale every entry in place.
    pub fn scale(&mut self, factor: f64) {
        for (_, v) in &mut self.entries {
            *v *= factor;
        }
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        debug_assert_eq!(dense.len(), self.dimension);
        self.entries.iter().map(|&(i, v)| v * dense[i]).sum()
    }
}

/// Compose order-`n` n-grams from a token sequence, joined with single spaces.
///
/// Returns exactly the order-`n` grams (not all orders up to `n`); an input
/// shorter than `n` yields nothing.
pub fn ngrams(tokens: &[String], n: usize) -> Vec<String> {
    assert!(n >= 1);
    if tokens.len() < n {
        return Vec::new();
    }
    tokens.windows(n).map(|w| w.join(" ")).collect()
}

/// Term -> contiguous index map over the n-grams of a corpus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Vocabulary {
    /// Persisted as the term list in index order, which both keeps model
    /// files byte-deterministic and encodes the no-gaps invariant.
    #[serde(
        serialize_with = "serialize_index",
        deserialize_with = "deserialize_index"
    )]
    index: HashMap<String, usize>,
    ngram_order: usize,
    min_document_frequency: usize,
}

fn serialize_index<S: serde::Serializer>(
    index: &HashMap<String, usize>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    let mut terms = vec![""; index.len()];
    for (term, &i) in index {
        terms[i] = term.as_str();
    }
    serializer.collect_seq(terms)
}

fn deserialize_index<'de, D: serde::Deserializer<'de>>(
    deserializer: D,
) -> Result<HashMap<String, usize>, D::Error> {
    let terms: Vec<String> = Vec::deserialize(deserializer)?;
    Ok(terms
        .into_iter()
        .enumerate()
        .map(|(i, term)| (term, i))
        .collect())
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn ngram_order(&self) -> usize {
        self.ngram_order
    }

    pub fn min_document_frequency(&self) -> usize {
        self.min_document_frequency
    }

    /// Terms in index order (index i holds term i).
    pub fn terms(&self) -> Vec<&str> {
        let mut out = vec![""; self.index.len()];
        for (term, &i) in &self.index {
            out[i] = term.as_str();
        }
        out
    }

    /// Stable content hash of the term/index mapping, used as the
    /// feature-space descriptor for persisted models.
    pub fn content_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ self.ngram_order as u64;
        for term in self.terms() {
            h ^= fnv1a_64(term.as_bytes());
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}

/// Collect every n-gram appearing in at least `min_df` documents; indices are
/// assigned lexicographically, so the result is independent of document order.
pub fn build_vocabulary(
    corpus: &Corpus,
    cfg: &TokenizerConfig,
    min_df: usize,
) -> Result<Vocabulary, FeaturesError> {
    let min_df = min_df.max(1);
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for record in corpus.records() {
        let tokens = tokenize(&record.text, cfg);
        let mut grams = ngrams(&tokens, cfg.ngram_order);
        grams.sort_unstable();
        grams.dedup();
        for gram in grams {
            *df.entry(gram).or_insert(0) += 1;
        }
    }
    let index: HashMap<String, usize> = df
        .into_iter()
        .filter(|&(_, count)| count >= min_df)
        .map(|(term, _)| term)
        .enumerate()
        .map(|(i, term)| (term, i))
        .collect();
    if index.is_empty() {
        return Err(FeaturesError::EmptyVocabulary { min_df });
    }
    Ok(Vocabulary {
        index,
        ngram_order: cfg.ngram_order,
        min_document_frequency: min_df,
    })
}

/// Count the vocabulary's n-grams in a token sequence. Unknown n-grams are
/// dropped; the result has dimension `|vocab|`.
pub fn count_vectorize(tokens: &[String], vocab: &Vocabulary) -> SparseVector {
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for gram in ngrams(tokens, vocab.ngram_order) {
        if let Some(i) = vocab.index_of(&gram) {
            *counts.entry(i).or_insert(0.0) += 1.0;
        }
    }
    SparseVector {
        dimension: vocab.len(),
        entries: counts.into_iter().collect(),
    }
}
