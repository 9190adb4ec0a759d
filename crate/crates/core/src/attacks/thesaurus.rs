//! Spam-keyword thesaurus and whole-word matching.

use super::AttackError;
use crate::corpus::{Corpus, Label};
use crate::features::{tokenize, TokenizerConfig};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::path::Path;

pub const DEFAULT_THESAURUS_SIZE: usize = 200;

/// Ranked list of the most frequent spam keywords: sorted by frequency
/// descending with lexicographic tie-break, at most K entries, all lowercase
/// and stopword-free.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thesaurus {
    entries: Vec<(String, u64)>,
    target_size: usize,
    #[serde(skip)]
    lookup: HashSet<String>,
}

impl Thesaurus {
    pub fn from_ranked(entries: Vec<(String, u64)>, target_size: usize) -> Self {
        let lookup = entries.iter().map(|(w, _)| w.clone()).collect();
        Self {
            entries,
            target_size,
            lookup,
        }
    }

    pub fn entries(&self) -> &[(String, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn contains(&self, word_lowercase: &str) -> bool {
        if self.lookup.len() == self.entries.len() {
            self.lookup.contains(word_lowercase)
        } else {
            // Deserialized without the cache; fall back to a scan.
            self.entries.iter().any(|(w, _)| w == word_lowercase)
        }
    }

    /// `keyword<TAB>frequency` per line, rank order.
    pub fn save(&self, path: &Path) -> Result<(), AttackError> {
        let mut out = String::new();
        for (word, freq) in &self.entries {
            out.push_str(word);
            out.push('\t');
            out.push_str(&freq.to_string());
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|source| AttackError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, AttackError> {
        let text = std::fs::read_to_string(path).map_err(|source| AttackError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (word, freq) = line.split_once('\t').ok_or_else(|| AttackError::Parse {
                path: path.display().to_string(),
                line: i + 1,
                reason: "expected `keyword<TAB>frequency`".into(),
            })?;
            let freq: u64 = freq.trim().parse().map_err(|_| AttackError::Parse {
                path: path.display().to_string(),
                line: i + 1,
                reason: format!("invalid frequency {freq:?}"),
            })?;
            // Keywords are lowercase by invariant; fold file entries so a
            // hand-edited "Payment" still matches.
            entries.push((word.to_lowercase(), freq));
        }
        let size = entries.len();
        Ok(Self::from_ranked(entries, size))
    }
}

/// Rank the top-K unigrams of a spam-only corpus by total token frequency.
pub fn build_thesaurus(
    spam_corpus: &Corpus,
    cfg: &TokenizerConfig,
    k: usize,
) -> Result<Thesaurus, AttackError> {
    for record in spam_corpus.records() {
        if record.label != Label::Spam {
            return Err(AttackError::NonSpamRecord {
                id: record.id.clone(),
                label: record.label.as_str().to_string(),
            });
        }
    }
    let mut counts: HashMap<String, u64> = HashMap::new();
    for record in spam_corpus.records() {
        for token in tokenize(&record.text, cfg) {
            *counts.entry(token.to_lowercase()).or_insert(0) += 1;
        }
    }
    if counts.is_empty() {
        return Err(AttackError::EmptyTokenStream);
    }
    let mut ranked: Vec<(String, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    Ok(Thesaurus::from_ranked(ranked, k))
}

/// A whole-word thesaurus hit, with byte offsets into the original text and
/// the span's original casing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordMatch {
    pub start: usize,
    pub end: usize,
    pub text: String,
}

/// Case-insensitive whole-word matches, left to right. A word is a maximal
/// run of alphanumeric characters, so keywords never match inside longer
/// words or URLs.
pub fn match_keywords(text: &str, thesaurus: &Thesaurus) -> Vec<KeywordMatch> {
    let mut matches = Vec::new();
    let mut word_start: Option<usize> = None;
    let push_word = |start: usize, end: usize, matches: &mut Vec<KeywordMatch>| {
        let word = &text[start..end];
        if thesaurus.contains(&word.to_lowercase()) {
            matches.push(KeywordMatch {
                start,
                end,
                text: word.to_string(),
            });
        }
    };
    for (i, c) in text.char_indices() {
        if c.is_alphanumeric() {
            if word_start.is_none() {
                word_start = Some(i);
            }
        } else if let Some(start) = word_start.take() {
            push_word(start, i, &mut matches);
        }
    }
    if let Some(start) = word_start {
        push_word(start, text.len(), &mut matches);
    }
    matches
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SmsRecord;
    use std::collections::BTreeSet;

    fn spam_corpus(texts: &[&str]) -> Corpus {
        Corpus::from_records(
            "t",
            texts
                .iter()
                .enumerate()
                .map(|(i, t)| SmsRecord::new(format!("s:{i}"), *t, Label::Spam, "t")),
        )
        .unwrap()
    }

    #[test]
    fn ranks_by_frequency_then_lexicographically() {
        let corpus = spam_corpus(&["win cash now", "win prize", "cash prize win"]);
        let stopwords: BTreeSet<String> = ["now".to_string()].into();
        let cfg = TokenizerConfig::bare().with_stopwords(stopwords);
        let thesaurus = build_thesaurus(&corpus, &cfg, 2).unwrap();
        assert_eq!(
            thesaurus.entries(),
            &[("win".to_string(), 3), ("cash".to_string(), 2)]
        );
    }

    #[test]
    fn k_larger_than_vocabulary_returns_everything() {
        let corpus = spam_corpus(&["win cash", "win"]);
        let thesaurus = build_thesaurus(&corpus, &TokenizerConfig::bare(), 100).unwrap();
        assert_eq!(thesaurus.len(), 2);
    }

    #[test]
    fn ham_record_violates_the_precondition() {
        let mut corpus = spam_corpus(&["win cash"]);
        corpus
            .push(SmsRecord::new("h:0", "see you soon", Label::Ham, "t"))
            .unwrap();
        assert!(matches!(
            build_thesaurus(&corpus, &TokenizerConfig::bare(), 10),
            Err(AttackError::NonSpamRecord { .. })
        ));
    }

    #[test]
    fn matches_whole_words_preserving_case() {
        let thesaurus =
            Thesaurus::from_ranked(vec![("payment".into(), 5), ("click".into(), 3)], 10);
        let text = "You may get a $750 Economic Support Payment. For more details, Click https://xxx.info/covid/";
        let matches = match_keywords(text, &thesaurus);
        let found: Vec<&str> = matches.iter().map(|m| m.text.as_str()).collect();
        assert_eq!(found, ["Payment", "Click"]);
        for m in &matches {
            assert_eq!(&text[m.start..m.end], m.text);
        }
    }

    #[test]
    fn no_match_inside_longer_words() {
        let thesaurus = Thesaurus::from_ranked(vec![("click".into(), 3)], 10);
        assert!(match_keywords("clickbait stories", &thesaurus).is_empty());
        assert!(match_keywords("no keywords here", &thesaurus).is_empty());
    }

    #[test]
    fn save_load_keeps_rank_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("thesaurus.tsv");
        let corpus = spam_corpus(&["win cash now win", "prize cash"]);
        let thesaurus = build_thesaurus(&corpus, &TokenizerConfig::bare(), 3).unwrap();
        thesaurus.save(&path).unwrap();
        let loaded = Thesaurus::load(&path).unwrap();
        assert_eq!(loaded.entries(), thesaurus.entries());
        assert!(loaded.contains("win"));
    }
}
