//! The six perturbation implementations.
//!
//! Spacing, homograph, paraphrase, and hybrid are RNG-free; charswap and EDA
//! consume a seeded ChaCha stream, so every attack is deterministic given
//! (text, resources, seed).

use super::thesaurus::{match_keywords, KeywordMatch, Thesaurus};
use super::{
    AttackConfig, AttackError, AttackResult, CharswapOp, Edit, EditOp, EdaOp, HomoglyphTable,
    LeetTable, SynonymLexicon,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn build_result(text: &str, matched: usize, unperturbable: usize, edits: Vec<Edit>) -> AttackResult {
    let result = AttackResult {
        original: text.to_string(),
        perturbed: String::new(),
        edits,
        matched_keyword_count: matched,
        unperturbable_spans: unperturbable,
    };
    AttackResult {
        perturbed: result.replay_edits(),
        ..result
    }
}

/// Rewrite matched spans one at a time; `perturb` returns None when a span
/// cannot be changed.
fn per_span_attack(
    text: &str,
    thesaurus: &Thesaurus,
    op: EditOp,
    mut perturb: impl FnMut(&KeywordMatch) -> Option<String>,
) -> AttackResult {
    let matches = match_keywords(text, thesaurus);
    let matched = matches.len();
    let mut edits = Vec::new();
    let mut unperturbable = 0;
    for m in &matches {
        match perturb(m) {
            Some(replacement) if replacement != m.text => edits.push(Edit {
                start: m.start,
                end: m.end,
                op,
                replacement,
            }),
            _ => unperturbable += 1,
        }
    }
    build_result(text, matched, unperturbable, edits)
}

/// Insert a single space between each adjacent character pair of every
/// matched keyword. RNG-free.
pub fn attack_spacing(text: &str, thesaurus: &Thesaurus) -> AttackResult {
    per_span_attack(text, thesaurus, EditOp::Spacing, |m| {
        Some(space_out(&m.text))
    })
}

fn space_out(word: &str) -> String {
    let chars: Vec<String> = word.chars().map(|c| c.to_string()).collect();
    chars.join(" ")
}

/// Replace every character that has a confusable with its first confusable.
/// Spans with no mappable characters are recorded as unperturbable. RNG-free,
/// one-to-one on characters so the grapheme count is preserved.
pub fn attack_homograph(text: &str, thesaurus: &Thesaurus, table: &HomoglyphTable) -> AttackResult {
    per_span_attack(text, thesaurus, EditOp::Homograph, |m| {
        let swapped: String = m
            .text
            .chars()
            .map(|c| table.confusable(c).unwrap_or(c))
            .collect();
        Some(swapped)
    })
}

/// Replace every matched keyword with its first lexicon synonym, preserving
/// the casing of the first letter. Keywords without a lexicon entry stay
/// unchanged. RNG-free.
pub fn attack_paraphrase(
    text: &str,
    thesaurus: &Thesaurus,
    lexicon: &SynonymLexicon,
) -> AttackResult {
    per_span_attack(text, thesaurus, EditOp::Paraphrase, |m| {
        let synonym = lexicon.first_synonym(&m.text.to_lowercase())?;
        Some(match_first_letter_case(&m.text, synonym))
    })
}

fn match_first_letter_case(original: &str, replacement: &str) -> String {
    let first_upper = original.chars().next().is_some_and(|c| c.is_uppercase());
    if !first_upper {
        return replacement.to_string();
    }
    let mut chars = replacement.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}

/// Leet-substitute every mappable character of a matched keyword, then space
/// the characters out. RNG-free.
pub fn attack_hybrid(text: &str, thesaurus: &Thesaurus, leet: &LeetTable) -> AttackResult {
    per_span_attack(text, thesaurus, EditOp::Hybrid, |m| {
        let swapped: String = m
            .text
            .chars()
            .map(|c| leet.substitute(c).unwrap_or(c))
            .collect();
        Some(space_out(&swapped))
    })
}

/// One seeded character operation per matched keyword: substitute, delete,
/// insert, or swap-adjacent at an interior position. Spans of three
/// characters only allow swap and substitute; shorter spans stay unchanged.
pub fn attack_charswap(
    text: &str,
    thesaurus: &Thesaurus,
    seed: u64,
    ops: &std::collections::BTreeSet<CharswapOp>,
) -> Result<AttackResult, AttackError> {
    if ops.is_empty() {
        return Err(AttackError::NoCharswapOps);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(per_span_attack(text, thesaurus, EditOp::Charswap, |m| {
        let chars: Vec<char> = m.text.chars().collect();
        let n = chars.len();
        if n < 3 {
            return None;
        }
        let allowed: Vec<CharswapOp> = if n == 3 {
            ops.iter()
                .copied()
                .filter(|op| matches!(op, CharswapOp::Swap | CharswapOp::Substitute))
                .collect()
        } else {
            ops.iter().copied().collect()
        };
        if allowed.is_empty() {
            return None;
        }
        let op = allowed[rng.gen_range(0..allowed.len())];
        let out = match op {
            CharswapOp::Substitute => {
                let i = rng.gen_range(1..=n - 2);
                substitute_at(&chars, i, &mut rng)
            }
            CharswapOp::Delete => {
                let i = rng.gen_range(1..=n - 2);
                delete_at(&chars, i)
            }
            CharswapOp::Insert => {
                let pos = rng.gen_range(1..=n - 1);
                let letter = random_letter(&mut rng, None);
                insert_at(&chars, pos, letter)
            }
            CharswapOp::Swap => {
                let i = rng.gen_range(1..=n - 2);
                swap_adjacent(&chars, i)
            }
        };
        Some(out)
    }))
}

pub(crate) fn swap_adjacent(chars: &[char], i: usize) -> String {
    let mut out = chars.to_vec();
    out.swap(i, i + 1);
    out.into_iter().collect()
}

pub(crate) fn delete_at(chars: &[char], i: usize) -> String {
    let mut out = chars.to_vec();
    out.remove(i);
    out.into_iter().collect()
}

pub(crate) fn insert_at(chars: &[char], pos: usize, c: char) -> String {
    let mut out = chars.to_vec();
    out.insert(pos, c);
    out.into_iter().collect()
}

fn substitute_at(chars: &[char], i: usize, rng: &mut ChaCha8Rng) -> String {
    let mut out = chars.to_vec();
    out[i] = random_letter(rng, Some(chars[i]));
    out.into_iter().collect()
}

/// Random lowercase ASCII letter, optionally excluding (case-folded) one.
fn random_letter(rng: &mut ChaCha8Rng, exclude: Option<char>) -> char {
    let excluded = exclude.and_then(|c| c.to_lowercase().next());
    let candidates: Vec<char> = ('a'..='z').filter(|c| Some(*c) != excluded).collect();
    candidates[rng.gen_range(0..candidates.len())]
}

/// Word-level perturbation of the whole message: `max(1, round(alpha * word
/// count))` applications of one operation, drawn from the config or from the
/// seed. Deletion never removes the last remaining word.
pub fn attack_eda(
    text: &str,
    cfg: &AttackConfig,
    lexicon: Option<&SynonymLexicon>,
) -> Result<AttackResult, AttackError> {
    if !(cfg.eda_rate > 0.0 && cfg.eda_rate <= 1.0) {
        return Err(AttackError::InvalidRate(cfg.eda_rate));
    }
    let mut words: Vec<String> = text.split_whitespace().map(str::to_string).collect();
    if words.is_empty() {
        return Ok(AttackResult::identity(text, 0, 0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let op = match cfg.eda_op {
        Some(op) => op,
        None => EdaOp::ALL[rng.gen_range(0..EdaOp::ALL.len())],
    };
    let n_ops = ((cfg.eda_rate * words.len() as f64).round() as usize).max(1);
    let mut changed = false;

    for _ in 0..n_ops {
        match op {
            EdaOp::Delete => {
                if words.len() > 1 {
                    let i = rng.gen_range(0..words.len());
                    words.remove(i);
                    changed = true;
                }
            }
            EdaOp::Swap => {
                if words.len() >= 2 {
                    let i = rng.gen_range(0..words.len());
                    let mut j = rng.gen_range(0..words.len() - 1);
                    if j >= i {
                        j += 1;
                    }
                    words.swap(i, j);
                    changed = true;
                }
            }
            EdaOp::Replace => {
                if let Some(lexicon) = lexicon {
                    let candidates: Vec<usize> = (0..words.len())
                        .filter(|&i| synonym_for(&words[i], lexicon).is_some())
                        .collect();
                    if !candidates.is_empty() {
                        let i = candidates[rng.gen_range(0..candidates.len())];
                        words[i] = replace_core(&words[i], lexicon);
                        changed = true;
                    }
                }
            }
            EdaOp::Insert => {
                if let Some(lexicon) = lexicon {
                    let candidates: Vec<usize> = (0..words.len())
                        .filter(|&i| synonym_for(&words[i], lexicon).is_some())
                        .collect();
                    if !candidates.is_empty() {
                        let i = candidates[rng.gen_range(0..candidates.len())];
                        let synonym = synonym_for(&words[i], lexicon)
                            .expect("candidate has a synonym")
                            .to_string();
                        let pos = rng.gen_range(0..=words.len());
                        words.insert(pos, synonym);
                        changed = true;
                    }
                }
            }
        }
    }

    if !changed {
        return Ok(AttackResult::identity(text, 0, 0));
    }
    let perturbed = words.join(" ");
    let edits = vec![Edit {
        start: 0,
        end: text.len(),
        op: EditOp::Eda,
        replacement: perturbed,
    }];
    Ok(build_result(text, 0, 0, edits))
}

/// Core of a word: the slice between the first and last alphanumeric chars.
fn word_core(word: &str) -> Option<(usize, usize)> {
    let start = word.char_indices().find(|(_, c)| c.is_alphanumeric())?.0;
    let (last, c) = word.char_indices().rfind(|(_, c)| c.is_alphanumeric())?;
    Some((start, last + c.len_utf8()))
}

fn synonym_for<'a>(word: &str, lexicon: &'a SynonymLexicon) -> Option<&'a str> {
    let (start, end) = word_core(word)?;
    lexicon.first_synonym(&word[start..end].to_lowercase())
}

fn replace_core(word: &str, lexicon: &SynonymLexicon) -> String {
    let (start, end) = word_core(word).expect("caller checked candidacy");
    let core = &word[start..end];
    let synonym = lexicon
        .first_synonym(&core.to_lowercase())
        .expect("caller checked candidacy");
    format!(
        "{}{}{}",
        &word[..start],
        match_first_letter_case(core, synonym),
        &word[end..]
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attacks::AttackKind;

    const SMISHING_SMS: &str = "You may get a $750 Economic Support Payment. For more details, Click https://xxx.info/covid/";

    fn thesaurus() -> Thesaurus {
        Thesaurus::from_ranked(vec![("payment".into(), 5), ("click".into(), 3)], 200)
    }

    #[test]
    fn spacing_matches_the_golden_examples() {
        let result = attack_spacing(SMISHING_SMS, &thesaurus());
        assert_eq!(
            result.perturbed,
            "You may get a $750 Economic Support P a y m e n t. For more details, C l i c k https://xxx.info/covid/"
        );
        assert_eq!(result.matched_keyword_count, 2);
        assert_eq!(result.replay_edits(), result.perturbed);
    }

    #[test]
    fn spacing_without_matches_is_identity() {
        let result = attack_spacing("nothing to see here", &thesaurus());
        assert_eq!(result.perturbed, result.original);
        assert!(result.edits.is_empty());
    }

    #[test]
    fn spacing_twice_equals_once() {
        let once = attack_spacing(SMISHING_SMS, &thesaurus());
        let twice = attack_spacing(&once.perturbed, &thesaurus());
        // Spaced-out words no longer whole-word match, so the second pass is
        // the identity.
        assert_eq!(twice.perturbed, once.perturbed);
        assert_eq!(twice.matched_keyword_count, 0);
    }

    #[test]
    fn charswap_primitives_match_their_definitions() {
        let chars: Vec<char> = "payment".chars().collect();
        assert_eq!(swap_adjacent(&chars, 3), "payemnt");
        assert_eq!(delete_at(&chars, 4), "paymnt");
        assert_eq!(insert_at(&chars, 3, 'q'), "payqment");
    }

    #[test]
    fn charswap_is_seed_deterministic_and_span_local() {
        let ops = CharswapOp::ALL.into_iter().collect();
        let a = attack_charswap(SMISHING_SMS, &thesaurus(), 99, &ops).unwrap();
        let b = attack_charswap(SMISHING_SMS, &thesaurus(), 99, &ops).unwrap();
        assert_eq!(a, b);
        let c = attack_charswap(SMISHING_SMS, &thesaurus(), 100, &ops).unwrap();
        assert_eq!(c.replay_edits(), c.perturbed);
        // Unmatched regions are untouched.
        assert!(a.perturbed.starts_with("You may get a $750 Economic Support "));
        assert!(a.perturbed.ends_with("https://xxx.info/covid/"));
    }

    #[test]
    fn charswap_never_touches_first_or_last_characters() {
        let thesaurus = Thesaurus::from_ranked(vec![("payment".into(), 1)], 10);
        let ops = [CharswapOp::Substitute, CharswapOp::Delete]
            .into_iter()
            .collect();
        for seed in 0..50 {
            let r = attack_charswap("send the payment now", &thesaurus, seed, &ops).unwrap();
            let edit = &r.edits[0];
            assert!(edit.replacement.starts_with('p'));
            assert!(edit.replacement.ends_with('t'));
        }
    }

    #[test]
    fn homograph_swaps_mapped_characters_only() {
        let table = HomoglyphTable::parse("a\tа\ne\tе\n", "mem").unwrap();
        let thesaurus = Thesaurus::from_ranked(vec![("payment".into(), 1)], 10);
        let result = attack_homograph("send payment today", &thesaurus, &table);
        assert_eq!(result.perturbed, "send p\u{0430}ym\u{0435}nt today");
        assert_eq!(result.unperturbable_spans, 0);
        // Code points differ, skeleton is unchanged.
        let edit = &result.edits[0];
        assert_ne!(edit.replacement, "payment");
        assert_eq!(table.skeleton(&edit.replacement), "payment");
        assert_eq!(
            edit.replacement.chars().count(),
            "payment".chars().count()
        );
    }

    #[test]
    fn homograph_flags_unmappable_spans() {
        let table = HomoglyphTable::parse("a\tа\n", "mem").unwrap();
        let thesaurus = Thesaurus::from_ranked(vec![("mvp".into(), 1)], 10);
        let result = attack_homograph("our mvp shipped", &thesaurus, &table);
        assert_eq!(result.perturbed, result.original);
        assert_eq!(result.unperturbable_spans, 1);
    }

    #[test]
    fn paraphrase_matches_the_golden_example() {
        let lexicon = SynonymLexicon::bundled();
        let result = attack_paraphrase(SMISHING_SMS, &thesaurus(), &lexicon);
        assert!(result.perturbed.contains("Support Compensation"));
        assert!(result.perturbed.contains("Tap https://"));
        assert_eq!(result.replay_edits(), result.perturbed);
    }

    #[test]
    fn paraphrase_skips_words_missing_from_the_lexicon() {
        let lexicon = SynonymLexicon::bundled();
        let thesaurus = Thesaurus::from_ranked(vec![("qwxzy".into(), 1)], 10);
        let result = attack_paraphrase("the qwxzy is here", &thesaurus, &lexicon);
        assert_eq!(result.perturbed, result.original);
        assert_eq!(result.unperturbable_spans, 1);
    }

    #[test]
    fn hybrid_matches_the_golden_examples() {
        let result = attack_hybrid(SMISHING_SMS, &thesaurus(), &LeetTable::bundled());
        assert!(result.perturbed.contains("P @ y m e n t"));
        assert!(result.perturbed.contains("C 1 i c k"));
        assert_eq!(result.replay_edits(), result.perturbed);
    }

    #[test]
    fn eda_delete_removes_exactly_one_word_at_default_rate() {
        let text = "one two three four five six seven eight nine ten";
        let mut cfg = AttackConfig::new(AttackKind::Eda, 5);
        cfg.eda_op = Some(EdaOp::Delete);
        let result = attack_eda(text, &cfg, None).unwrap();
        let words: Vec<&str> = result.perturbed.split_whitespace().collect();
        assert_eq!(words.len(), 9);
        let original: Vec<&str> = text.split_whitespace().collect();
        assert!(words.iter().all(|w| original.contains(w)));
    }

    #[test]
    fn eda_swap_on_one_word_is_identity() {
        let mut cfg = AttackConfig::new(AttackKind::Eda, 5);
        cfg.eda_op = Some(EdaOp::Swap);
        let result = attack_eda("hello", &cfg, None).unwrap();
        assert_eq!(result.perturbed, "hello");
        assert!(result.edits.is_empty());
    }

    #[test]
    fn eda_is_seed_deterministic() {
        let cfg = AttackConfig::new(AttackKind::Eda, 123);
        let lexicon = SynonymLexicon::bundled();
        let a = attack_eda(SMISHING_SMS, &cfg, Some(&lexicon)).unwrap();
        let b = attack_eda(SMISHING_SMS, &cfg, Some(&lexicon)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn eda_delete_never_empties_the_text() {
        let mut cfg = AttackConfig::new(AttackKind::Eda, 9);
        cfg.eda_op = Some(EdaOp::Delete);
        cfg.eda_rate = 1.0;
        let result = attack_eda("two words", &cfg, None).unwrap();
        assert_eq!(result.perturbed.split_whitespace().count(), 1);
    }

    #[test]
    fn eda_replace_uses_the_lexicon() {
        let mut cfg = AttackConfig::new(AttackKind::Eda, 3);
        cfg.eda_op = Some(EdaOp::Replace);
        cfg.eda_rate = 1.0;
        let lexicon = SynonymLexicon::bundled();
        let result = attack_eda("Payment due now.", &cfg, Some(&lexicon)).unwrap();
        // Every replaceable word has a synonym applied, punctuation intact.
        assert!(result.perturbed.contains("Compensation"));
        assert!(result.perturbed.contains("immediately."));
    }
}
