//! Attack resource tables: synonym lexicon, homoglyph confusables with their
//! skeleton map, and the leet substitution table. Bundled defaults are
//! compiled in; every table can be overridden from a file.
//!
//! File format for all three: `key<TAB>alt1,alt2,...` per line, UTF-8, LF,
//! code points written literally.

use super::AttackError;
use std::collections::HashMap;
use std::path::Path;

const BUNDLED_SYNONYMS: &str = include_str!("../../data/synonyms.tsv");
const BUNDLED_HOMOGLYPHS: &str = include_str!("../../data/homoglyphs.tsv");
const BUNDLED_LEET: &str = include_str!("../../data/leet.tsv");

fn parse_pairs(text: &str, path: &str) -> Result<Vec<(String, Vec<String>)>, AttackError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, alts) = line.split_once('\t').ok_or_else(|| AttackError::Parse {
            path: path.to_string(),
            line: i + 1,
            reason: "expected `key<TAB>alt1,alt2,...`".into(),
        })?;
        let alts: Vec<String> = alts
            .split(',')
            .map(|a| a.trim().to_string())
            .filter(|a| !a.is_empty())
            .collect();
        if alts.is_empty() {
            return Err(AttackError::Parse {
                path: path.to_string(),
                line: i + 1,
                reason: "no alternatives listed".into(),
            });
        }
        if alts.iter().any(|a| a == key) {
            return Err(AttackError::Parse {
                path: path.to_string(),
                line: i + 1,
                reason: format!("{key:?} maps to itself"),
            });
        }
        out.push((key.to_string(), alts));
    }
    Ok(out)
}

/// word -> ordered synonym list, all lowercase, no self-mappings.
#[derive(Debug, Clone, Default)]
pub struct SynonymLexicon {
    map: HashMap<String, Vec<String>>,
}

impl SynonymLexicon {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_SYNONYMS, "<bundled synonyms>").expect("bundled lexicon is valid")
    }

    pub fn load(path: &Path) -> Result<Self, AttackError> {
        let text = std::fs::read_to_string(path).map_err(|source| AttackError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    fn parse(text: &str, path: &str) -> Result<Self, AttackError> {
        let mut map = HashMap::new();
        for (i, (word, synonyms)) in parse_pairs(text, path)?.into_iter().enumerate() {
            let word = word.to_lowercase();
            let synonyms: Vec<String> =
                synonyms.into_iter().map(|s| s.to_lowercase()).collect();
            // Self-map check again after case folding.
            if synonyms.contains(&word) {
                return Err(AttackError::Parse {
                    path: path.to_string(),
                    line: i + 1,
                    reason: format!("{word:?} maps to itself"),
                });
            }
            map.insert(word, synonyms);
        }
        Ok(Self { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn first_synonym(&self, word_lowercase: &str) -> Option<&str> {
        self.map
            .get(word_lowercase)
            .and_then(|alts| alts.first())
            .map(String::as_str)
    }
}

/// Latin character -> ordered confusable code points, plus the inverse
/// skeleton map used to assert visual equivalence.
#[derive(Debug, Clone)]
pub struct HomoglyphTable {
    map: HashMap<char, Vec<char>>,
    skeleton: HashMap<char, char>,
}

impl HomoglyphTable {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_HOMOGLYPHS, "<bundled homoglyphs>").expect("bundled table is valid")
    }

    pub fn load(path: &Path) -> Result<Self, AttackError> {
        let text = std::fs::read_to_string(path).map_err(|source| AttackError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, path: &str) -> Result<Self, AttackError> {
        let mut map = HashMap::new();
        let mut skeleton = HashMap::new();
        for (i, (key, alts)) in parse_pairs(text, path)?.into_iter().enumerate() {
            let source = single_char(&key, path, i + 1)?;
            let mut confusables = Vec::with_capacity(alts.len());
            for alt in &alts {
                let c = single_char(alt, path, i + 1)?;
                confusables.push(c);
                skeleton.insert(c, source);
            }
            map.insert(source, confusables);
        }
        Ok(Self { map, skeleton })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// First confusable for a character, if any.
    pub fn confusable(&self, c: char) -> Option<char> {
        self.map.get(&c).and_then(|alts| alts.first()).copied()
    }

    /// Map every known confusable back to its Latin base character.
    pub fn skeleton(&self, text: &str) -> String {
        text.chars()
            .map(|c| self.skeleton.get(&c).copied().unwrap_or(c))
            .collect()
    }
}

/// Character -> visually similar ASCII substitute.
#[derive(Debug, Clone)]
pub struct LeetTable {
    map: HashMap<char, char>,
}

impl LeetTable {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_LEET, "<bundled leet>").expect("bundled table is valid")
    }

    pub fn load(path: &Path) -> Result<Self, AttackError> {
        let text = std::fs::read_to_string(path).map_err(|source| AttackError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    fn parse(text: &str, path: &str) -> Result<Self, AttackError> {
        let mut map = HashMap::new();
        for (i, (key, alts)) in parse_pairs(text, path)?.into_iter().enumerate() {
            let source = single_char(&key, path, i + 1)?;
            let target = single_char(&alts[0], path, i + 1)?;
            map.insert(source, target);
        }
        Ok(Self { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Substitute for a character; uppercase letters fall back to their
    /// lowercase entry.
    pub fn substitute(&self, c: char) -> Option<char> {
        self.map.get(&c).copied().or_else(|| {
            c.to_lowercase()
                .next()
                .filter(|lc| *lc != c)
                .and_then(|lc| self.map.get(&lc).copied())
        })
    }
}

fn single_char(s: &str, path: &str, line: usize) -> Result<char, AttackError> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(AttackError::Parse {
            path: path.to_string(),
            line,
            reason: format!("{s:?} is not a single character"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lexicon_covers_the_golden_keywords() {
        let lexicon = SynonymLexicon::bundled();
        assert_eq!(lexicon.first_synonym("payment"), Some("compensation"));
        assert_eq!(lexicon.first_synonym("click"), Some("tap"));
        assert_eq!(lexicon.first_synonym("free"), Some("complimentary"));
        assert_eq!(lexicon.first_synonym("absentword"), None);
    }

    #[test]
    fn bundled_homoglyphs_differ_from_their_sources() {
        let table = HomoglyphTable::bundled();
        assert!(table.len() >= 35);
        for c in "aceopsxy".chars() {
            let alt = table.confusable(c).unwrap();
            assert_ne!(alt, c);
            assert_eq!(table.skeleton(&alt.to_string()), c.to_string());
        }
    }

    #[test]
    fn skeleton_maps_cyrillic_lookalikes_back() {
        let table = HomoglyphTable::bundled();
        assert_eq!(table.skeleton("р\u{0430}yment"), "payment");
        assert_eq!(table.skeleton("plain"), "plain");
    }

    #[test]
    fn leet_substitutions_are_case_insensitive() {
        let leet = LeetTable::bundled();
        assert_eq!(leet.substitute('a'), Some('@'));
        assert_eq!(leet.substitute('A'), Some('@'));
        assert_eq!(leet.substitute('l'), Some('1'));
        assert_eq!(leet.substitute('e'), None);
        assert_eq!(leet.substitute('i'), None);
    }

    #[test]
    fn self_mapping_is_rejected() {
        assert!(SynonymLexicon::parse("word\tword\n", "mem").is_err());
    }
}
