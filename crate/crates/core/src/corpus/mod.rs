//! SMS corpus ingestion and cleaning: records, language filtering,
//! deduplication, label suggestion, and splitting.

mod io;
mod language;
mod rules;
mod split;

pub use io::{load_corpus, save_corpus, CorpusFormat};
pub use language::{
    detect_language, filter_non_english, LanguageDetector, LanguageGuess, LanguageProfile,
};
pub use rules::{default_rules, suggest_labels, LabelingRule, RuleId};
pub use split::{split_corpus, CorpusSplits, SplitSpec};

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("record text must be non-empty (id {id})")]
    EmptyText { id: String },
    #[error("duplicate record id {id}")]
    DuplicateId { id: String },
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot split: {0}")]
    Split(String),
    #[error("cannot detect language of empty text")]
    EmptyDetectionInput,
}

/// Message class. Spam is the positive class everywhere downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Spam,
    Ham,
    Unlabeled,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Spam => "spam",
            Label::Ham => "ham",
            Label::Unlabeled => "unlabeled",
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        match token {
            "spam" => Some(Label::Spam),
            "ham" => Some(Label::Ham),
            "unlabeled" => Some(Label::Unlabeled),
            _ => None,
        }
    }
}

/// One labeled SMS message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmsRecord {
    pub id: String,
    pub text: String,
    pub label: Label,
    pub source: String,
    pub language: Option<String>,
}

impl SmsRecord {
    /// Panics on empty text; use [`SmsRecord::try_new`] for fallible paths.
    pub fn new(
        id: impl Into<String>,
        text: impl Into<String>,
        label: Label,
        source: impl Into<String>,
    ) -> Self {
        Self::try_new(id, text, label, source).expect("non-empty text")
    }

    pub fn try_new(
        id: impl Into<String>,
        text: impl Into<String>,
        label: Label,
        source: impl Into<String>,
    ) -> Result<Self, CorpusError> {
        let id = id.into();
        let text = text.into();
        if text.is_empty() {
            return Err(CorpusError::EmptyText { id });
        }
        Ok(Self {
            id,
            text,
            label,
            source: source.into(),
            language: None,
        })
    }
}

/// Ordered collection of records with distinct ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    records: Vec<SmsRecord>,
    provenance: String,
    #[serde(skip)]
    ids: HashSet<String>,
}

impl Corpus {
    pub fn new(provenance: impl Into<String>) -> Self {
        Self {
            records: Vec::new(),
            provenance: provenance.into(),
            ids: HashSet::new(),
        }
    }

    pub fn from_records(
        provenance: impl Into<String>,
        records: impl IntoIterator<Item = SmsRecord>,
    ) -> Result<Self, CorpusError> {
        let mut corpus = Self::new(provenance);
        for record in records {
            corpus.push(record)?;
        }
        Ok(corpus)
    }

    /// Append a record, rejecting duplicate ids and empty text.
    pub fn push(&mut self, record: SmsRecord) -> Result<(), CorpusError> {
        if record.text.is_empty() {
            return Err(CorpusError::EmptyText { id: record.id });
        }
        if !self.ids.insert(record.id.clone()) {
            return Err(CorpusError::DuplicateId { id: record.id });
        }
        self.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> &[SmsRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SmsRecord> {
        self.records.iter()
    }

    pub fn count_label(&self, label: Label) -> usize {
        self.records.iter().filter(|r| r.label == label).count()
    }

    /// New corpus holding only the records satisfying the predicate, in the
    /// original order.
    pub fn filtered(&self, mut keep: impl FnMut(&SmsRecord) -> bool) -> Corpus {
        let records: Vec<SmsRecord> =
            self.records.iter().filter(|r| keep(r)).cloned().collect();
        let ids = records.iter().map(|r| r.id.clone()).collect();
        Corpus {
            records,
            provenance: self.provenance.clone(),
            ids,
        }
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a SmsRecord;
    type IntoIter = std::slice::Iter<'a, SmsRecord>;
    fn into_iter(self) -> Self::IntoIter {
        self.records.iter()
    }
}

/// Keep the first occurrence of each exact raw text; byte-identical
/// comparison, order preserved. Idempotent.
pub fn deduplicate(corpus: &Corpus) -> Corpus {
    let mut seen: HashSet<String> = HashSet::new();
    corpus.filtered(|r| seen.insert(r.text.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus_of(texts: &[&str]) -> Corpus {
        let records = texts
            .iter()
            .enumerate()
            .map(|(i, t)| SmsRecord::new(format!("t:{i}"), *t, Label::Ham, "test"));
        Corpus::from_records("test", records).unwrap()
    }

    #[test]
    fn dedup_keeps_first_occurrence() {
        let out = deduplicate(&corpus_of(&["A", "A", "B"]));
        let texts: Vec<&str> = out.records().iter().map(|r| r.text.as_str()).collect();
        assert_eq!(texts, ["A", "B"]);
        assert_eq!(out.records()[0].id, "t:0");
    }

    #[test]
    fn dedup_is_byte_exact() {
        let out = deduplicate(&corpus_of(&["A", "a"]));
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn dedup_is_idempotent() {
        let once = deduplicate(&corpus_of(&["x", "y", "x", "z", "y"]));
        let twice = deduplicate(&once);
        assert_eq!(once, twice);
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let mut c = Corpus::new("test");
        c.push(SmsRecord::new("a", "one", Label::Spam, "s")).unwrap();
        let err = c.push(SmsRecord::new("a", "two", Label::Ham, "s")).unwrap_err();
        assert!(matches!(err, CorpusError::DuplicateId { .. }));
    }

    #[test]
    fn empty_text_is_rejected() {
        assert!(SmsRecord::try_new("a", "", Label::Ham, "s").is_err());
    }
}
