//! Seeded three-way corpus splitting: an all-spam holdout for adversarial
//! evaluation plus a train/test partition of the remainder.

use super::{Corpus, CorpusError, Label};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SplitSpec {
    /// Fraction of the non-holdout remainder that goes to train, in (0,1).
    pub train_fraction: f64,
    /// Number of spam records reserved for the adversarial holdout.
    pub holdout_spam_count: usize,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_fraction: 0.8,
            holdout_spam_count: 225,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusSplits {
    pub train: Corpus,
    pub test: Corpus,
    pub holdout: Corpus,
}

/// Split a fully labeled corpus into disjoint train/test/holdout subsets.
///
/// The holdout is exactly `holdout_spam_count` spam records drawn by seeded
/// uniform sampling and removed from the pool; the remainder is partitioned
/// with a seeded shuffle, train size rounded to the nearest integer. Each
/// output preserves the input's relative record order, and the same seed
/// always reproduces the same member id-sets.
pub fn split_corpus(corpus: &Corpus, spec: &SplitSpec) -> Result<CorpusSplits, CorpusError> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(CorpusError::Split(format!(
            "train_fraction must be in (0,1), got {}",
            spec.train_fraction
        )));
    }
    if let Some(unlabeled) = corpus.records().iter().find(|r| r.label == Label::Unlabeled) {
        return Err(CorpusError::Split(format!(
            "unlabeled record present: {}",
            unlabeled.id
        )));
    }
    let spam_indices: Vec<usize> = corpus
        .records()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.label == Label::Spam)
        .map(|(i, _)| i)
        .collect();
    if spam_indices.len() < spec.holdout_spam_count {
        return Err(CorpusError::Split(format!(
            "holdout needs {} spam records but the corpus has {}",
            spec.holdout_spam_count,
            spam_indices.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut shuffled_spam = spam_indices;
    shuffled_spam.shuffle(&mut rng);
    let holdout_set: HashSet<usize> = shuffled_spam
        .into_iter()
        .take(spec.holdout_spam_count)
        .collect();

    let mut remainder: Vec<usize> = (0..corpus.len())
        .filter(|i| !holdout_set.contains(i))
        .collect();
    remainder.shuffle(&mut rng);
    let train_size = (remainder.len() as f64 * spec.train_fraction).round() as usize;
    let train_set: HashSet<usize> = remainder.iter().take(train_size).copied().collect();
    let test_set: HashSet<usize> = remainder.iter().skip(train_size).copied().collect();

    let pick = |set: &HashSet<usize>, name: &str| {
        let records = corpus
            .records()
            .iter()
            .enumerate()
            .filter(|(i, _)| set.contains(i))
            .map(|(_, r)| r.clone());
        Corpus::from_records(format!("{}:{name}", corpus.provenance()), records)
            .expect("source corpus invariants hold")
    };

    Ok(CorpusSplits {
        train: pick(&train_set, "train"),
        test: pick(&test_set, "test"),
        holdout: pick(&holdout_set, "holdout"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SmsRecord;

    fn labeled_corpus(spam: usize, ham: usize) -> Corpus {
        let mut c = Corpus::new("t");
        for i in 0..spam {
            c.push(SmsRecord::new(format!("s:{i}"), format!("spam {i}"), Label::Spam, "t"))
                .unwrap();
        }
        for i in 0..ham {
            c.push(SmsRecord::new(format!("h:{i}"), format!("ham {i}"), Label::Ham, "t"))
                .unwrap();
        }
        c
    }

    fn ids(c: &Corpus) -> Vec<String> {
        c.records().iter().map(|r| r.id.clone()).collect()
    }

    #[test]
    fn sizes_match_the_stated_arithmetic() {
        let corpus = labeled_corpus(1000, 3000);
        let spec = SplitSpec {
            train_fraction: 0.8,
            holdout_spam_count: 225,
            seed: 7,
        };
        let splits = split_corpus(&corpus, &spec).unwrap();
        assert_eq!(splits.holdout.len(), 225);
        assert!(splits.holdout.records().iter().all(|r| r.label == Label::Spam));
        assert_eq!(splits.train.len(), 3020); // round(3775 * 0.8)
        assert_eq!(splits.test.len(), 755);
    }

    #[test]
    fn same_seed_reproduces_the_same_id_sets() {
        let corpus = labeled_corpus(300, 700);
        let spec = SplitSpec {
            train_fraction: 0.8,
            holdout_spam_count: 225,
            seed: 42,
        };
        let a = split_corpus(&corpus, &spec).unwrap();
        let b = split_corpus(&corpus, &spec).unwrap();
        assert_eq!(ids(&a.train), ids(&b.train));
        assert_eq!(ids(&a.test), ids(&b.test));
        assert_eq!(ids(&a.holdout), ids(&b.holdout));
    }

    #[test]
    fn zero_holdout_gives_a_plain_partition() {
        let corpus = labeled_corpus(10, 30);
        let spec = SplitSpec {
            train_fraction: 0.8,
            holdout_spam_count: 0,
            seed: 1,
        };
        let splits = split_corpus(&corpus, &spec).unwrap();
        assert!(splits.holdout.is_empty());
        assert_eq!(splits.train.len(), 32);
        assert_eq!(splits.test.len(), 8);
    }

    #[test]
    fn too_few_spam_is_an_error() {
        let corpus = labeled_corpus(10, 30);
        let spec = SplitSpec {
            train_fraction: 0.8,
            holdout_spam_count: 11,
            seed: 1,
        };
        assert!(matches!(split_corpus(&corpus, &spec), Err(CorpusError::Split(_))));
    }

    #[test]
    fn unlabeled_record_is_an_error() {
        let mut corpus = labeled_corpus(5, 5);
        corpus
            .push(SmsRecord::new("u:0", "???", Label::Unlabeled, "t"))
            .unwrap();
        let spec = SplitSpec {
            train_fraction: 0.8,
            holdout_spam_count: 2,
            seed: 1,
        };
        assert!(matches!(split_corpus(&corpus, &spec), Err(CorpusError::Split(_))));
    }
}
