//! SMS spam detection and robustness-evaluation toolkit.
//!
//! The pipeline runs in stages, each usable on its own:
//!
//! 1. [`corpus`] — ingest raw SMS corpora, filter non-English text,
//!    deduplicate, suggest labels, and produce train/test/holdout splits.
//! 2. [`features`] — sparse syntactic vectors (bag of words, n-grams,
//!    TF-IDF) and dense pooled word-embedding vectors.
//! 3. [`classifiers`] — four shallow model families: two-class linear SVM,
//!    linear one-class model, PU-bagging ensemble, and a hashed-n-gram
//!    shallow text classifier.
//! 4. [`attacks`] — spam-keyword thesaurus and six black-box text
//!    perturbations (paraphrase, EDA, homograph, spacing, charswap, hybrid).
//! 5. [`eval`] — confusion matrices, precision/recall/F1/accuracy, the
//!    two-phase evaluation protocol, and CSV/Markdown report rendering.
//!
//! All seeded operations are deterministic: the same inputs, configuration,
//! and seed produce byte-identical outputs, serial or parallel.

pub mod attacks;
pub mod classifiers;
pub mod corpus;
pub mod eval;
pub mod features;

mod hashing;
mod serde_util;

pub use hashing::{derive_seed, fnv1a_64};
