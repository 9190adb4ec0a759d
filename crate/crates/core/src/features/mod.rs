//! Feature extraction: tokenization, sparse syntactic vectors, and dense
//! pooled embeddings.

mod embeddings;
mod tfidf;
mod vocab;

pub use embeddings::{embed_message, load_embeddings, load_embeddings_from_reader, EmbeddingTable};
pub use tfidf::{tfidf_fit, tfidf_transform, Normalize, TfIdfModel};
pub use vocab::{build_vocabulary, count_vectorize, ngrams, SparseVector, Vocabulary};

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// Bundled English stopword list, one token per line.
const STOPWORDS_EN: &str = include_str!("../../data/stopwords_en.txt");

#[derive(Debug, Error)]
pub enum FeaturesError {
    #[error("effective vocabulary is empty (no n-gram meets min_df={min_df})")]
    EmptyVocabulary { min_df: usize },
    #[error("embedding file {path}, line {line}: {reason}")]
    EmbeddingParse {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("io error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Tokenizer settings shared by vocabularies, TF-IDF models, and the
/// thesaurus builder.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    pub strip_punctuation: bool,
    /// Lowercase tokens removed after splitting.
    pub stopwords: BTreeSet<String>,
    /// Order of the n-grams composed downstream; tokenization itself always
    /// yields unigrams.
    pub ngram_order: usize,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            lowercase: true,
            strip_punctuation: true,
            stopwords: english_stopwords(),
            ngram_order: 1,
        }
    }
}

impl TokenizerConfig {
    /// Config with no stopword removal; useful in tests and for attacks that
    /// must see every word.
    pub fn bare() -> Self {
        Self {
            lowercase: true,
            strip_punctuation: true,
            stopwords: BTreeSet::new(),
            ngram_order: 1,
        }
    }

    pub fn with_ngram_order(mut self, n: usize) -> Self {
        assert!(n >= 1, "ngram_order must be >= 1");
        self.ngram_order = n;
        self
    }

    pub fn with_stopwords(mut self, stopwords: BTreeSet<String>) -> Self {
        self.stopwords = stopwords.into_iter().map(|w| w.to_lowercase()).collect();
        self
    }
}

/// The bundled English stopword list (~170 entries).
pub fn english_stopwords() -> BTreeSet<String> {
    STOPWORDS_EN
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect()
}

/// Parse a stopword file: one token per line, blank lines ignored.
pub fn load_stopwords(path: &std::path::Path) -> Result<BTreeSet<String>, FeaturesError> {
    let text = std::fs::read_to_string(path).map_err(|source| FeaturesError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.to_lowercase())
        .collect())
}

/// Normalize a message into word tokens.
///
/// Applies, in order: lowercasing, removal of punctuation/symbol characters
/// (any character that is neither alphanumeric nor whitespace), splitting on
/// Unicode whitespace, and stopword removal. Pure and deterministic; an
/// empty result is permitted.
pub fn tokenize(text: &str, cfg: &TokenizerConfig) -> Vec<String> {
    let lowered;
    let text = if cfg.lowercase {
        lowered = text.to_lowercase();
        &lowered
    } else {
        text
    };
    let stripped;
    let text = if cfg.strip_punctuation {
        stripped = text
            .chars()
            .filter(|c| c.is_alphanumeric() || c.is_whitespace())
            .collect::<String>();
        &stripped
    } else {
        text
    };
    text.split_whitespace()
        .filter(|t| !cfg.stopwords.contains(&t.to_lowercase()))
        .map(str::to_string)
        .collect()
}
