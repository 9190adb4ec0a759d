//! Property suite for the pipeline invariants: corpus cleaning and splitting,
//! sparse feature construction, attack edit-replay, and classifier basics.

use proptest::collection::vec;
use proptest::prelude::*;
use smsgauntlet_core::attacks::{
    apply_attack, build_thesaurus, match_keywords, AttackConfig, AttackKind, AttackResources,
    HomoglyphTable, LeetTable, SynonymLexicon, Thesaurus,
};
use smsgauntlet_core::classifiers::{
    train_linear, train_shallow_text, Loss, TrainConfig,
};
use smsgauntlet_core::corpus::{
    deduplicate, filter_non_english, split_corpus, Corpus, Label, LanguageDetector, SmsRecord,
    SplitSpec,
};
use smsgauntlet_core::features::{
    build_vocabulary, count_vectorize, embed_message, tfidf_fit, tfidf_transform, tokenize,
    EmbeddingTable, TokenizerConfig,
};
use std::collections::HashSet;

fn word() -> impl Strategy<Value = String> {
    "[a-z]{1,8}"
}

fn message() -> impl Strategy<Value = String> {
    vec(word(), 1..12).prop_map(|words| words.join(" "))
}

fn corpus(min: usize, max: usize) -> impl Strategy<Value = Corpus> {
    vec((message(), any::<bool>()), min..max).prop_map(|rows| {
        Corpus::from_records(
            "prop",
            rows.into_iter().enumerate().map(|(i, (text, spam))| {
                SmsRecord::new(
                    format!("r:{i}"),
                    text,
                    if spam { Label::Spam } else { Label::Ham },
                    "prop",
                )
            }),
        )
        .unwrap()
    })
}

fn ids(c: &Corpus) -> Vec<String> {
    c.records().iter().map(|r| r.id.clone()).collect()
}

fn is_subsequence(sub: &[String], full: &[String]) -> bool {
    let mut it = full.iter();
    sub.iter().all(|x| it.any(|y| y == x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dedup_is_idempotent_order_preserving_and_duplicate_free(c in corpus(1, 40)) {
        let once = deduplicate(&c);
        prop_assert_eq!(&deduplicate(&once), &once);
        prop_assert!(is_subsequence(&ids(&once), &ids(&c)));
        let texts: Vec<&str> = once.records().iter().map(|r| r.text.as_str()).collect();
        let unique: HashSet<&&str> = texts.iter().collect();
        prop_assert_eq!(unique.len(), texts.len());
    }

    #[test]
    fn language_filter_is_an_order_preserving_subset(c in corpus(1, 30)) {
        let pass1 = LanguageDetector::bundled(300);
        let pass2 = LanguageDetector::bundled(150);
        let kept = filter_non_english(&c, &pass1, &pass2);
        prop_assert!(kept.len() <= c.len());
        prop_assert!(is_subsequence(&ids(&kept), &ids(&c)));
    }

    #[test]
    fn split_is_disjoint_covering_and_seeded(
        c in corpus(8, 60),
        holdout_frac in 0.0f64..0.9,
        seed in any::<u64>(),
    ) {
        let spam_count = c.count_label(Label::Spam);
        let spec = SplitSpec {
            train_fraction: 0.8,
            holdout_spam_count: (holdout_frac * spam_count as f64) as usize,
            seed,
        };
        let a = split_corpus(&c, &spec).unwrap();
        let b = split_corpus(&c, &spec).unwrap();

        prop_assert_eq!(a.holdout.len(), spec.holdout_spam_count);
        prop_assert!(a.holdout.records().iter().all(|r| r.label == Label::Spam));

        let mut seen: HashSet<String> = HashSet::new();
        for part in [&a.train, &a.test, &a.holdout] {
            for id in ids(part) {
                prop_assert!(seen.insert(id), "splits must be disjoint");
            }
        }
        prop_assert_eq!(seen.len(), c.len(), "splits must cover the corpus");

        prop_assert_eq!(ids(&a.train), ids(&b.train));
        prop_assert_eq!(ids(&a.test), ids(&b.test));
        prop_assert_eq!(ids(&a.holdout), ids(&b.holdout));
    }

    #[test]
    fn sparse_vectors_are_strictly_increasing_and_in_bounds(c in corpus(2, 25), doc in message()) {
        let cfg = TokenizerConfig::bare();
        let vocab = build_vocabulary(&c, &cfg, 1).unwrap();
        let tfidf = tfidf_fit(&c, &vocab, &cfg);
        let tokens = tokenize(&doc, &cfg);
        for v in [count_vectorize(&tokens, &vocab), tfidf_transform(&tfidf, &tokens)] {
            prop_assert_eq!(v.dimension(), vocab.len());
            let mut last: Option<usize> = None;
            for &(i, value) in v.entries() {
                prop_assert!(i < v.dimension());
                prop_assert!(value.is_finite());
                if let Some(last) = last {
                    prop_assert!(i > last, "indices must strictly increase");
                }
                last = Some(i);
            }
        }
    }

    #[test]
    fn tfidf_l2_vectors_have_unit_norm(c in corpus(2, 25)) {
        let cfg = TokenizerConfig::bare();
        let vocab = build_vocabulary(&c, &cfg, 1).unwrap();
        let tfidf = tfidf_fit(&c, &vocab, &cfg);
        for record in c.records() {
            let v = tfidf_transform(&tfidf, &tokenize(&record.text, &cfg));
            if !v.is_zero() {
                prop_assert!((v.l2_norm() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn vocabulary_is_permutation_invariant(c in corpus(2, 25), seed in any::<u64>()) {
        let cfg = TokenizerConfig::bare();
        let vocab = build_vocabulary(&c, &cfg, 1).unwrap();
        // Rotate the record order; lexicographic indexing must not notice.
        let mut records: Vec<SmsRecord> = c.records().to_vec();
        let rot = (seed as usize) % records.len().max(1);
        records.rotate_left(rot);
        let shuffled = Corpus::from_records("prop", records).unwrap();
        let vocab2 = build_vocabulary(&shuffled, &cfg, 1).unwrap();
        prop_assert_eq!(vocab.terms(), vocab2.terms());
    }

    #[test]
    fn count_vectorize_conserves_in_vocab_mass(c in corpus(2, 25), doc in message()) {
        let cfg = TokenizerConfig::bare();
        let vocab = build_vocabulary(&c, &cfg, 1).unwrap();
        let tokens = tokenize(&doc, &cfg);
        let in_vocab = tokens.iter().filter(|t| vocab.index_of(t).is_some()).count();
        let v = count_vectorize(&tokens, &vocab);
        let mass: f64 = v.entries().iter().map(|(_, c)| c).sum();
        prop_assert_eq!(mass as usize, in_vocab);
    }

    #[test]
    fn message_embedding_is_permutation_invariant(words in vec(word(), 1..10), rot in any::<usize>()) {
        let table = EmbeddingTable::new(8, 42, 0.1);
        let pooled = embed_message(&words, &table);
        let mut rotated = words.clone();
        let rot = rot % rotated.len();
        rotated.rotate_left(rot);
        let pooled2 = embed_message(&rotated, &table);
        for (a, b) in pooled.iter().zip(&pooled2) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn attack_edits_replay_and_stay_inside_matched_spans(
        text in message(),
        keywords in vec(word(), 1..5),
        seed in any::<u64>(),
    ) {
        let thesaurus = Thesaurus::from_ranked(
            keywords.iter().map(|w| (w.clone(), 1u64)).collect(),
            keywords.len(),
        );
        let resources = AttackResources {
            thesaurus: Some(thesaurus.clone()),
            lexicon: Some(SynonymLexicon::bundled()),
            homoglyphs: Some(HomoglyphTable::bundled()),
            leet: Some(LeetTable::bundled()),
        };
        let spans: Vec<(usize, usize)> = match_keywords(&text, &thesaurus)
            .iter()
            .map(|m| (m.start, m.end))
            .collect();
        for kind in AttackKind::REPORT_ORDER {
            let cfg = AttackConfig::new(kind, seed);
            let result = apply_attack(&text, &cfg, &resources).unwrap();
            prop_assert_eq!(&result.replay_edits(), &result.perturbed);
            let again = apply_attack(&text, &cfg, &resources).unwrap();
            prop_assert_eq!(&again, &result, "attacks must be deterministic per seed");
            if kind != AttackKind::Eda {
                for edit in &result.edits {
                    prop_assert!(
                        spans.contains(&(edit.start, edit.end)),
                        "edit outside matched spans"
                    );
                }
            }
        }
    }

    #[test]
    fn homograph_outputs_are_skeleton_identical(word in "[a-z]{3,10}") {
        let table = HomoglyphTable::bundled();
        let thesaurus = Thesaurus::from_ranked(vec![(word.clone(), 1)], 1);
        let text = format!("x {word} y");
        let result = smsgauntlet_core::attacks::attack_homograph(&text, &thesaurus, &table);
        if result.edits.is_empty() {
            prop_assert_eq!(result.unperturbable_spans, 1);
        } else {
            let replacement = &result.edits[0].replacement;
            prop_assert_ne!(replacement, &word, "code points must differ");
            prop_assert_eq!(table.skeleton(replacement), word);
        }
    }

    #[test]
    fn thesaurus_ranking_is_a_stable_total_order(texts in vec(message(), 1..15)) {
        let records: Vec<SmsRecord> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| SmsRecord::new(format!("s:{i}"), t.clone(), Label::Spam, "p"))
            .collect();
        let c = Corpus::from_records("p", records).unwrap();
        let cfg = TokenizerConfig::bare();
        let a = build_thesaurus(&c, &cfg, 50).unwrap();
        let b = build_thesaurus(&c, &cfg, 50).unwrap();
        prop_assert_eq!(a.entries(), b.entries());
        for pair in a.entries().windows(2) {
            prop_assert!(
                pair[0].1 > pair[1].1 || (pair[0].1 == pair[1].1 && pair[0].0 < pair[1].0),
                "ranking must be frequency desc then lexicographic"
            );
        }
    }

    #[test]
    fn shallow_text_probabilities_form_a_simplex(tokens in vec(word(), 0..10), seed in any::<u64>()) {
        let docs = vec![
            vec!["win".to_string(), "cash".to_string()],
            vec!["dinner".to_string(), "tonight".to_string()],
            vec!["free".to_string(), "prize".to_string()],
            vec!["see".to_string(), "you".to_string()],
        ];
        let labels = vec![Label::Spam, Label::Ham, Label::Spam, Label::Ham];
        let cfg = TrainConfig { seed, ..TrainConfig::default() };
        let model = train_shallow_text(&docs, &labels, 4, 256, &cfg).unwrap();
        let p = model.predict_probs(&tokens);
        prop_assert!(p[0] >= 0.0 && p[1] >= 0.0);
        prop_assert!((p[0] + p[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn linear_training_fits_separable_sets(
        seed in any::<u64>(),
        points in vec((-5.0f64..5.0, -5.0f64..5.0), 4..40),
    ) {
        // Label by a fixed separator and keep only comfortably-margined
        // points, so the set is separable by construction.
        let (w0, w1, b) = (1.0, -2.0, 0.25);
        let mut features: Vec<Vec<f64>> = Vec::new();
        let mut labels: Vec<i8> = Vec::new();
        for (x, y) in points {
            let s = w0 * x + w1 * y + b;
            if s.abs() < 0.5 {
                continue;
            }
            features.push(vec![x, y]);
            labels.push(if s > 0.0 { 1 } else { -1 });
        }
        prop_assume!(labels.contains(&1) && labels.contains(&-1));
        let cfg = TrainConfig {
            epochs: 200,
            learning_rate: 0.5,
            regularization: 1e-6,
            seed,
            shuffle: true,
        };
        let model = train_linear(&features, &labels, Loss::Hinge, &cfg).unwrap();
        let model2 = train_linear(&features, &labels, Loss::Hinge, &cfg).unwrap();
        prop_assert_eq!(model.weights(), model2.weights(), "training must be deterministic");
        for (x, &y) in features.iter().zip(&labels) {
            let s = model.score(x).unwrap();
            prop_assert_eq!(s > 0.0, y > 0, "separable set must be fit exactly");
        }
    }
}
