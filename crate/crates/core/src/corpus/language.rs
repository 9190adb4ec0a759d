//! Character n-gram language identification.
//!
//! Classic profile rank-distance scheme: a language profile is the ranked
//! list of its most frequent character 1–3 grams; an input is identified by
//! the profile with the smallest out-of-place distance. Profiles for ten
//! languages are bundled, built from embedded sample text.

use super::{Corpus, CorpusError};
use std::collections::HashMap;
use std::path::Path;

const BUNDLED: &[(&str, &str)] = &[
    ("en", include_str!("../../data/lang/en.txt")),
    ("fr", include_str!("../../data/lang/fr.txt")),
    ("de", include_str!("../../data/lang/de.txt")),
    ("es", include_str!("../../data/lang/es.txt")),
    ("it", include_str!("../../data/lang/it.txt")),
    ("pt", include_str!("../../data/lang/pt.txt")),
    ("nl", include_str!("../../data/lang/nl.txt")),
    ("sv", include_str!("../../data/lang/sv.txt")),
    ("pl", include_str!("../../data/lang/pl.txt")),
    ("tr", include_str!("../../data/lang/tr.txt")),
];

/// Outcome of language detection. Texts shorter than three characters after
/// whitespace stripping (or with no letters at all) are `Indeterminate`,
/// which is not an error.
#[derive(Debug, Clone, PartialEq)]
pub enum LanguageGuess {
    Identified { code: String, confidence: f64 },
    Indeterminate,
}

impl LanguageGuess {
    pub fn code(&self) -> Option<&str> {
        match self {
            LanguageGuess::Identified { code, .. } => Some(code),
            LanguageGuess::Indeterminate => None,
        }
    }

    /// Filtering rule: English and Indeterminate both count as keep.
    pub fn keeps_english(&self) -> bool {
        match self {
            LanguageGuess::Identified { code, .. } => code == "en",
            LanguageGuess::Indeterminate => true,
        }
    }
}

/// Ranked n-gram frequency profile for one language.
#[derive(Debug, Clone)]
pub struct LanguageProfile {
    code: String,
    /// n-gram -> rank (0 = most frequent), truncated to the profile size.
    ranks: HashMap<String, usize>,
    /// n-gram -> raw count, kept for saving.
    counts: Vec<(String, u64)>,
}

impl LanguageProfile {
    /// Build a profile of the `size` most frequent character 1–3 grams.
    pub fn from_text(code: impl Into<String>, text: &str, size: usize) -> Self {
        let counts = rank_ngrams(char_ngram_counts(text), size);
        let ranks = counts
            .iter()
            .enumerate()
            .map(|(rank, (gram, _))| (gram.clone(), rank))
            .collect();
        Self {
            code: code.into(),
            ranks,
            counts,
        }
    }

    pub fn code(&self) -> &str {
        &self.code
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Load a profile file: one `ngram<TAB>count` pair per line. The
    /// language code is taken from the file stem.
    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let code = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut raw: HashMap<String, u64> = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (gram, count) = line.split_once('\t').ok_or_else(|| CorpusError::Parse {
                path: path.display().to_string(),
                line: i + 1,
                reason: "expected `ngram<TAB>count`".into(),
            })?;
            let count: u64 = count.trim().parse().map_err(|_| CorpusError::Parse {
                path: path.display().to_string(),
                line: i + 1,
                reason: format!("invalid count {count:?}"),
            })?;
            *raw.entry(gram.to_string()).or_insert(0) += count;
        }
        let size = raw.len();
        let counts = rank_ngrams(raw, size);
        let ranks = counts
            .iter()
            .enumerate()
            .map(|(rank, (gram, _))| (gram.clone(), rank))
            .collect();
        Ok(Self { code, ranks, counts })
    }

    pub fn save(&self, path: &Path) -> Result<(), CorpusError> {
        let mut out = String::new();
        for (gram, count) in &self.counts {
            out.push_str(gram);
            out.push('\t');
            out.push_str(&count.to_string());
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    /// Copy truncated to the `size` highest-ranked n-grams.
    fn truncated(&self, size: usize) -> Self {
        let mut counts = self.counts.clone();
        counts.truncate(size);
        let ranks = counts
            .iter()
            .enumerate()
            .map(|(rank, (gram, _))| (gram.clone(), rank))
            .collect();
        Self {
            code: self.code.clone(),
            ranks,
            counts,
        }
    }
}

/// A set of language profiles sharing one profile size.
#[derive(Debug, Clone)]
pub struct LanguageDetector {
    profiles: Vec<LanguageProfile>,
    profile_size: usize,
}

impl LanguageDetector {
    /// Detector over the ten bundled language profiles.
    pub fn bundled(profile_size: usize) -> Self {
        let profiles = BUNDLED
            .iter()
            .map(|(code, text)| LanguageProfile::from_text(*code, text, profile_size))
            .collect();
        Self {
            profiles,
            profile_size,
        }
    }

    /// Detector over user-supplied profiles, each truncated to
    /// `profile_size` so rank distances stay on the detector's scale.
    pub fn from_profiles(profiles: Vec<LanguageProfile>, profile_size: usize) -> Self {
        assert!(!profiles.is_empty(), "detector needs at least one profile");
        let profiles = profiles.iter().map(|p| p.truncated(profile_size)).collect();
        Self {
            profiles,
            profile_size,
        }
    }

    pub fn codes(&self) -> Vec<&str> {
        self.profiles.iter().map(|p| p.code()).collect()
    }

    pub fn has_profile(&self, code: &str) -> bool {
        self.profiles.iter().any(|p| p.code() == code)
    }

    fn distance(&self, input: &[(String, u64)], profile: &LanguageProfile) -> u64 {
        let max_penalty = self.profile_size as u64;
        input
            .iter()
            .enumerate()
            .map(|(input_rank, (gram, _))| match profile.ranks.get(gram) {
                Some(&rank) => (rank as i64 - input_rank as i64).unsigned_abs(),
                None => max_penalty,
            })
            .sum()
    }
}

/// Identify the language of a text. Deterministic for fixed profiles; ties
/// are broken by lexicographically smallest code.
pub fn detect_language(
    text: &str,
    detector: &LanguageDetector,
) -> Result<LanguageGuess, CorpusError> {
    if text.is_empty() {
        return Err(CorpusError::EmptyDetectionInput);
    }
    let stripped: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if stripped.chars().count() < 3 {
        return Ok(LanguageGuess::Indeterminate);
    }
    let input = rank_ngrams(char_ngram_counts(text), detector.profile_size);
    if input.is_empty() {
        // No letters at all (digits/punctuation only).
        return Ok(LanguageGuess::Indeterminate);
    }
    let mut best: Option<(&LanguageProfile, u64)> = None;
    for profile in &detector.profiles {
        let d = detector.distance(&input, profile);
        best = match best {
            Some((bp, bd)) if d > bd || (d == bd && profile.code() >= bp.code()) => Some((bp, bd)),
            _ => Some((profile, d)),
        };
    }
    let (profile, distance) = best.expect("non-empty profile set");
    let worst = (input.len() as u64) * (detector.profile_size as u64);
    let confidence = 1.0 - (distance as f64 / worst as f64);
    Ok(LanguageGuess::Identified {
        code: profile.code().to_string(),
        confidence,
    })
}

/// Two-pass language filter: a record survives only if both detectors keep
/// it (English or Indeterminate). Order-preserving subset of the input.
pub fn filter_non_english(
    corpus: &Corpus,
    pass1: &LanguageDetector,
    pass2: &LanguageDetector,
) -> Corpus {
    corpus.filtered(|record| {
        let keep = |detector| match detect_language(&record.text, detector) {
            Ok(guess) => guess.keeps_english(),
            Err(_) => false,
        };
        keep(pass1) && keep(pass2)
    })
}

/// Character 1–3 gram counts over letter runs. Text is lowercased, non-letter
/// characters split words, and each word is padded with `_` so that word
/// boundaries contribute to the profile.
fn char_ngram_counts(text: &str) -> HashMap<String, u64> {
    let mut counts: HashMap<String, u64> = HashMap::new();
    let lowered = text.to_lowercase();
    for word in lowered.split(|c: char| !c.is_alphabetic()) {
        if word.is_empty() {
            continue;
        }
        let padded: Vec<char> = std::iter::once('_')
            .chain(word.chars())
            .chain(std::iter::once('_'))
            .collect();
        for n in 1..=3 {
            if padded.len() < n {
                continue;
            }
            for window in padded.windows(n) {
                if window.iter().all(|&c| c == '_') {
                    continue;
                }
                *counts.entry(window.iter().collect()).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Sort by count descending then lexicographically, truncating to `size`.
fn rank_ngrams(counts: HashMap<String, u64>, size: usize) -> Vec<(String, u64)> {
    let mut ranked: Vec<(String, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(size);
    ranked
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Label, SmsRecord};

    fn detector() -> LanguageDetector {
        LanguageDetector::bundled(300)
    }

    #[test]
    fn identifies_the_sample_spam_message_as_english() {
        let text = "You may get a $750 Economic Support Payment. For more details, Click https://xxx.info/covid/";
        match detect_language(text, &detector()).unwrap() {
            LanguageGuess::Identified { code, confidence } => {
                assert_eq!(code, "en");
                assert!(confidence > 0.0 && confidence <= 1.0);
            }
            LanguageGuess::Indeterminate => panic!("expected an identification"),
        }
    }

    #[test]
    fn identifies_obvious_french_and_german() {
        let fr = "Je vous appellerai demain parce que nous devons parler du voyage et des billets pour les enfants.";
        let de = "Ich rufe dich morgen an, weil wir über die Reise und die Fahrkarten für die Kinder sprechen müssen.";
        assert_eq!(detect_language(fr, &detector()).unwrap().code(), Some("fr"));
        assert_eq!(detect_language(de, &detector()).unwrap().code(), Some("de"));
    }

    #[test]
    fn empty_text_is_a_precondition_violation() {
        assert!(matches!(
            detect_language("", &detector()),
            Err(CorpusError::EmptyDetectionInput)
        ));
    }

    #[test]
    fn short_text_is_indeterminate() {
        assert_eq!(
            detect_language("ok", &detector()).unwrap(),
            LanguageGuess::Indeterminate
        );
        assert_eq!(
            detect_language(" o k ", &detector()).unwrap(),
            LanguageGuess::Indeterminate
        );
    }

    #[test]
    fn digits_only_is_indeterminate() {
        assert_eq!(
            detect_language("12345 678", &detector()).unwrap(),
            LanguageGuess::Indeterminate
        );
    }

    #[test]
    fn detection_is_deterministic() {
        let text = "please call me back when you get this message";
        let a = detect_language(text, &detector()).unwrap();
        let b = detect_language(text, &detector()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn two_pass_filter_keeps_english_and_short_texts() {
        let texts = [
            ("1", "can you bring the keys when you come over tonight?"),
            ("2", "nous allons au marché pour acheter du pain et du lait"),
            ("3", "ok"),
            ("4", "wir gehen morgen auf den markt um brot zu kaufen"),
        ];
        let corpus = Corpus::from_records(
            "t",
            texts
                .iter()
                .map(|(id, t)| SmsRecord::new(*id, *t, Label::Ham, "t")),
        )
        .unwrap();
        let out = filter_non_english(&corpus, &LanguageDetector::bundled(300), &LanguageDetector::bundled(150));
        let ids: Vec<&str> = out.records().iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["1", "3"]);
    }

    #[test]
    fn filter_is_identity_on_empty_and_all_english() {
        let empty = Corpus::new("t");
        let p1 = LanguageDetector::bundled(300);
        let p2 = LanguageDetector::bundled(150);
        assert_eq!(filter_non_english(&empty, &p1, &p2).len(), 0);

        let english = Corpus::from_records(
            "t",
            [
                SmsRecord::new("1", "see you at the station tomorrow morning", Label::Ham, "t"),
                SmsRecord::new("2", "thanks for your help with the work yesterday", Label::Ham, "t"),
            ],
        )
        .unwrap();
        let out = filter_non_english(&english, &p1, &p2);
        assert_eq!(out, english);
    }

    #[test]
    fn every_bundled_profile_identifies_its_own_sample() {
        let detector = detector();
        for (code, text) in super::BUNDLED {
            let first_sentence = text.split('.').next().unwrap();
            assert_eq!(
                detect_language(first_sentence, &detector).unwrap().code(),
                Some(*code),
                "sample for {code} misidentified"
            );
        }
    }

    #[test]
    fn profile_save_load_roundtrip_preserves_detection() {
        let dir = tempfile::tempdir().unwrap();
        let mut profiles = Vec::new();
        for (code, text) in super::BUNDLED {
            let profile = LanguageProfile::from_text(*code, text, 300);
            let path = dir.path().join(format!("{code}.profile"));
            profile.save(&path).unwrap();
            profiles.push(LanguageProfile::load(&path).unwrap());
        }
        let loaded = LanguageDetector::from_profiles(profiles, 300);
        let text = "please send me the details about the offer you mentioned";
        assert_eq!(
            detect_language(text, &loaded).unwrap(),
            detect_language(text, &detector()).unwrap()
        );
    }
}
