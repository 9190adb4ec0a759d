use crate::args::*;
use crate::context::{write_atomic, Config};
use crate::CliError;
use smsgauntlet_core::attacks::{
    apply_attack, build_thesaurus, AttackConfig, AttackKind, AttackResources, CharswapOp, EdaOp,
    HomoglyphTable, LeetTable, SynonymLexicon, Thesaurus,
};
use smsgauntlet_core::classifiers::{
    load_model, save_model, train_linear, train_one_class, train_pu_bagging, train_shallow_text,
    Featurizer, Loss, ModelBundle, ModelKind, TrainConfig, DEFAULT_BUCKET_COUNT,
};
use smsgauntlet_core::corpus::{
    deduplicate, filter_non_english, load_corpus, save_corpus, split_corpus, suggest_labels,
    default_rules, Corpus, CorpusFormat, Label, LanguageDetector, LanguageProfile, SmsRecord,
    SplitSpec,
};
use smsgauntlet_core::derive_seed;
use smsgauntlet_core::eval::{
    evaluate_bundle, parse_performance_csv, parse_robustness_csv, render_performance,
    render_robustness, robustness_eval, PerformanceRow, ReportFormat,
};
use smsgauntlet_core::features::{
    build_vocabulary, embed_message, load_embeddings, load_stopwords, tfidf_fit, tfidf_transform,
    tokenize, SparseVector, TokenizerConfig,
};
use std::path::{Path, PathBuf};

pub fn run(cli: Cli) -> Result<(), CliError> {
    let config = Config::load(cli.config.as_deref())?;
    if let Some(jobs) = config.jobs(cli.jobs)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Data(format!("cannot configure {jobs} jobs: {e}")))?;
    }
    match cli.command {
        Command::Clean(args) => clean(args, &config),
        Command::LabelAssist(args) => label_assist(args, &config),
        Command::Split(args) => split(args, &config),
        Command::Thesaurus(args) => thesaurus(args, &config),
        Command::Train(args) => train(args, &config),
        Command::Evaluate(args) => evaluate(args, &config),
        Command::Attack(args) => attack(args, &config),
        Command::Robustness(args) => robustness(args, &config),
        Command::Report(args) => report(args, &config),
    }
}

fn data<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

fn resolve_format(flag: &Option<String>, path: &Path, flag_name: &str) -> Result<CorpusFormat, CliError> {
    match flag {
        Some(token) => CorpusFormat::parse(token)
            .ok_or_else(|| CliError::Usage(format!("{flag_name} must be tsv or csv, got {token:?}"))),
        None => Ok(CorpusFormat::from_path(path)),
    }
}

fn load_input(path: &Path, format: &Option<String>) -> Result<Corpus, CliError> {
    let fmt = resolve_format(format, path, "--format")?;
    let corpus = load_corpus(path, fmt).map_err(data)?;
    eprintln!("loaded {} records from {}", corpus.len(), path.display());
    Ok(corpus)
}

fn save_corpus_atomic(corpus: &Corpus, path: &Path) -> Result<(), CliError> {
    let fmt = CorpusFormat::from_path(path);
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let dir = dir.unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
    let tmp = tempfile::Builder::new()
        .suffix(&format!(
            ".{}",
            path.extension().and_then(|e| e.to_str()).unwrap_or("tsv")
        ))
        .tempfile_in(dir)
        .map_err(|e| CliError::Data(format!("cannot create temp file: {e}")))?;
    save_corpus(corpus, tmp.path(), fmt).map_err(data)?;
    tmp.persist(path)
        .map_err(|e| CliError::Data(format!("cannot persist {}: {e}", path.display())))?;
    eprintln!("wrote {} records to {}", corpus.len(), path.display());
    Ok(())
}

fn tokenizer_config(
    stopwords: &Option<PathBuf>,
    ngram: usize,
) -> Result<TokenizerConfig, CliError> {
    let mut cfg = TokenizerConfig::default().with_ngram_order(ngram);
    if let Some(path) = stopwords {
        cfg.stopwords = load_stopwords(path).map_err(data)?;
    }
    Ok(cfg)
}

fn clean(args: CleanArgs, _config: &Config) -> Result<(), CliError> {
    let mut corpus = load_input(&args.input, &args.format)?;
    if !args.skip_language_filter {
        let (pass1, pass2) = match &args.profile_dir {
            None => (LanguageDetector::bundled(300), LanguageDetector::bundled(150)),
            Some(dir) => {
                let mut profiles = Vec::new();
                let entries = std::fs::read_dir(dir)
                    .map_err(|e| CliError::Data(format!("cannot read {}: {e}", dir.display())))?;
                let mut paths: Vec<PathBuf> = entries
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("profile"))
                    .collect();
                paths.sort();
                for path in paths {
                    profiles.push(LanguageProfile::load(&path).map_err(data)?);
                }
                if profiles.is_empty() {
                    return Err(CliError::Data(format!(
                        "{}: no .profile files found",
                        dir.display()
                    )));
                }
                (
                    LanguageDetector::from_profiles(profiles.clone(), 300),
                    LanguageDetector::from_profiles(profiles, 150),
                )
            }
        };
        if !pass1.has_profile("en") {
            return Err(CliError::Data("language profiles do not include en".into()));
        }
        let before = corpus.len();
        corpus = filter_non_english(&corpus, &pass1, &pass2);
        eprintln!("language filter kept {} of {before}", corpus.len());
    }
    if !args.skip_dedup {
        let before = corpus.len();
        corpus = deduplicate(&corpus);
        eprintln!("dedup kept {} of {before}", corpus.len());
    }
    save_corpus_atomic(&corpus, &args.out)
}

fn label_assist(args: LabelAssistArgs, _config: &Config) -> Result<(), CliError> {
    let corpus = load_input(&args.input, &args.format)?;
    let rules = default_rules();
    let mut out = Vec::new();
    {
        let mut writer = csv::Writer::from_writer(&mut out);
        writer
            .write_record(["id", "label", "rules", "text"])
            .map_err(data)?;
        for record in corpus.records() {
            let fired = suggest_labels(record, &rules);
            let fired: Vec<&str> = fired.iter().map(|r| r.as_str()).collect();
            writer
                .write_record([
                    record.id.as_str(),
                    record.label.as_str(),
                    &fired.join(";"),
                    record.text.as_str(),
                ])
                .map_err(data)?;
        }
        writer.flush().map_err(data)?;
    }
    write_atomic(&args.out, &out)?;
    eprintln!("wrote rule suggestions to {}", args.out.display());
    Ok(())
}

fn split(args: SplitArgs, config: &Config) -> Result<(), CliError> {
    let corpus = load_input(&args.input, &args.format)?;
    let spec = SplitSpec {
        train_fraction: config.f64_or(args.train_frac, "train_frac", 0.8)?,
        holdout_spam_count: config.usize_or(args.holdout_spam, "holdout_spam", 225)?,
        seed: config.resolve_seed(args.seed)?,
    };
    let splits = split_corpus(&corpus, &spec).map_err(data)?;
    let ext = args
        .input
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("tsv")
        .to_string();
    for (name, part) in [
        ("train", &splits.train),
        ("test", &splits.test),
        ("holdout", &splits.holdout),
    ] {
        save_corpus_atomic(part, &args.out_dir.join(format!("{name}.{ext}")))?;
    }
    Ok(())
}

fn thesaurus(args: ThesaurusArgs, config: &Config) -> Result<(), CliError> {
    let corpus = load_input(&args.input, &args.format)?;
    let spam_only = corpus.filtered(|r| r.label == Label::Spam);
    if spam_only.is_empty() {
        return Err(CliError::Data(format!(
            "{}: no spam records to build a thesaurus from",
            args.input.display()
        )));
    }
    let k = config.usize_or(args.k, "k", 200)?;
    let cfg = tokenizer_config(&args.stopwords, 1)?;
    let thesaurus = build_thesaurus(&spam_only, &cfg, k).map_err(data)?;
    let mut bytes = Vec::new();
    for (word, freq) in thesaurus.entries() {
        bytes.extend_from_slice(format!("{word}\t{freq}\n").as_bytes());
    }
    write_atomic(&args.out, &bytes)?;
    eprintln!(
        "wrote {} keywords (from {} spam records) to {}",
        thesaurus.len(),
        spam_only.len(),
        args.out.display()
    );
    Ok(())
}

fn signed_labels(corpus: &Corpus) -> Result<Vec<i8>, CliError> {
    corpus
        .records()
        .iter()
        .map(|r| match r.label {
            Label::Spam => Ok(1),
            Label::Ham => Ok(-1),
            Label::Unlabeled => Err(CliError::Data(format!(
                "record {} is unlabeled; label or drop it before training",
                r.id
            ))),
        })
        .collect()
}

fn detect_embedding_dim(path: &Path) -> Result<usize, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if i == 0 && fields.len() == 2 && fields.iter().all(|f| f.parse::<usize>().is_ok()) {
            return fields[1]
                .parse()
                .map_err(|_| CliError::Data("invalid embedding header".into()));
        }
        if fields.len() >= 2 {
            return Ok(fields.len() - 1);
        }
    }
    Err(CliError::Data(format!(
        "{}: no vectors found",
        path.display()
    )))
}

fn train(args: TrainArgs, config: &Config) -> Result<(), CliError> {
    let corpus = load_input(&args.input, &args.format)?;
    let seed = config.resolve_seed(args.seed)?;
    let train_cfg = TrainConfig {
        epochs: config.usize_or(args.epochs, "epochs", 20)?,
        learning_rate: config.f64_or(args.lr, "lr", 0.1)?,
        regularization: config.f64_or(args.lambda, "lambda", 1e-4)?,
        seed,
        shuffle: !args.no_shuffle,
    };
    let ngram = config.usize_or(args.ngram, "ngram", 1)?;
    let min_df = config.usize_or(args.min_df, "min_df", 1)?;
    let name = args.name.clone().unwrap_or_else(|| {
        args.out
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "model".to_string())
    });

    let features_kind = config
        .string(args.features.clone(), "features")?
        .unwrap_or_else(|| "tfidf".to_string());
    let model_kind = args.model.as_str();

    // Build the featurizer and per-record feature vectors.
    enum Feats {
        Sparse(Vec<SparseVector>),
        Dense(Vec<Vec<f64>>),
        Tokens(Vec<Vec<String>>),
    }
    let tokenizer = tokenizer_config(&args.stopwords, ngram)?;
    let (featurizer, feats) = match (model_kind, features_kind.as_str()) {
        ("shallow", _) => {
            let docs: Vec<Vec<String>> = corpus
                .records()
                .iter()
                .map(|r| tokenize(&r.text, &tokenizer))
                .collect();
            (
                Featurizer::Tokens {
                    tokenizer: tokenizer.clone(),
                },
                Feats::Tokens(docs),
            )
        }
        (_, "tfidf") => {
            let vocab = build_vocabulary(&corpus, &tokenizer, min_df).map_err(data)?;
            let model = tfidf_fit(&corpus, &vocab, &tokenizer);
            eprintln!("tf-idf vocabulary: {} terms (ngram={ngram}, min_df={min_df})", vocab.len());
            let feats = corpus
                .records()
                .iter()
                .map(|r| tfidf_transform(&model, &tokenize(&r.text, &tokenizer)))
                .collect();
            (
                Featurizer::TfIdf {
                    tokenizer: tokenizer.clone(),
                    model,
                },
                Feats::Sparse(feats),
            )
        }
        (_, "embedding") => {
            let path = args.embeddings.as_ref().ok_or_else(|| {
                CliError::Usage("--embeddings is required when --features embedding".into())
            })?;
            let dim = match config.usize_or(args.embedding_dim, "embedding_dim", 0)? {
                0 => detect_embedding_dim(path)?,
                d => d,
            };
            let oov_scale = config.f64_or(args.oov_scale, "oov_scale", 0.1)?;
            let table = load_embeddings(path, dim, seed, oov_scale).map_err(data)?;
            eprintln!("embeddings: {} tokens x {dim} dims", table.len());
            let feats = corpus
                .records()
                .iter()
                .map(|r| embed_message(&tokenize(&r.text, &tokenizer), &table))
                .collect();
            (
                Featurizer::Embedding {
                    tokenizer: tokenizer.clone(),
                    table,
                },
                Feats::Dense(feats),
            )
        }
        (_, other) => {
            return Err(CliError::Usage(format!(
                "--features must be tfidf or embedding, got {other:?}"
            )))
        }
    };

    let classifier = match model_kind {
        "linear" => {
            let loss = match config.string(args.loss.clone(), "loss")?.as_deref() {
                None | Some("hinge") => Loss::Hinge,
                Some("logistic") => Loss::Logistic,
                Some(other) => {
                    return Err(CliError::Usage(format!(
                        "--loss must be hinge or logistic, got {other:?}"
                    )))
                }
            };
            let labels = signed_labels(&corpus)?;
            let model = match &feats {
                Feats::Sparse(v) => train_linear(v, &labels, loss, &train_cfg),
                Feats::Dense(v) => train_linear(v, &labels, loss, &train_cfg),
                Feats::Tokens(_) => unreachable!("tokens are shallow-only"),
            }
            .map_err(data)?;
            ModelKind::Linear(model)
        }
        "oneclass" => {
            // One-class training sees only the positive (spam) class.
            let nu = config.f64_or(args.nu, "nu", 0.5)?;
            let spam_idx: Vec<usize> = corpus
                .records()
                .iter()
                .enumerate()
                .filter(|(_, r)| r.label == Label::Spam)
                .map(|(i, _)| i)
                .collect();
            if spam_idx.is_empty() {
                return Err(CliError::Data("no spam records to train on".into()));
            }
            let model = match &feats {
                Feats::Sparse(v) => {
                    let picked: Vec<_> = spam_idx.iter().map(|&i| v[i].clone()).collect();
                    train_one_class(&picked, nu, &train_cfg)
                }
                Feats::Dense(v) => {
                    let picked: Vec<_> = spam_idx.iter().map(|&i| v[i].clone()).collect();
                    train_one_class(&picked, nu, &train_cfg)
                }
                Feats::Tokens(_) => unreachable!(),
            }
            .map_err(data)?;
            ModelKind::OneClass(model)
        }
        "pu" => {
            // Positives are the spam records; everything else is the
            // unlabeled pool.
            let bags = config.usize_or(args.bags, "bags", 50)?;
            let is_pos: Vec<bool> = corpus
                .records()
                .iter()
                .map(|r| r.label == Label::Spam)
                .collect();
            if !is_pos.contains(&true) || !is_pos.contains(&false) {
                return Err(CliError::Data(
                    "pu training needs spam records plus an unlabeled pool".into(),
                ));
            }
            let model = match &feats {
                Feats::Sparse(v) => {
                    let pos: Vec<_> = v.iter().zip(&is_pos).filter(|(_, p)| **p).map(|(x, _)| x.clone()).collect();
                    let unl: Vec<_> = v.iter().zip(&is_pos).filter(|(_, p)| !**p).map(|(x, _)| x.clone()).collect();
                    train_pu_bagging(&pos, &unl, bags, &train_cfg)
                }
                Feats::Dense(v) => {
                    let pos: Vec<_> = v.iter().zip(&is_pos).filter(|(_, p)| **p).map(|(x, _)| x.clone()).collect();
                    let unl: Vec<_> = v.iter().zip(&is_pos).filter(|(_, p)| !**p).map(|(x, _)| x.clone()).collect();
                    train_pu_bagging(&pos, &unl, bags, &train_cfg)
                }
                Feats::Tokens(_) => unreachable!(),
            }
            .map_err(data)?;
            ModelKind::PuBagging(model)
        }
        "shallow" => {
            let dim = config.usize_or(args.dim, "dim", 16)?;
            let buckets = config.usize_or(args.buckets, "buckets", DEFAULT_BUCKET_COUNT)?;
            let labels: Vec<Label> = corpus.records().iter().map(|r| r.label).collect();
            let Feats::Tokens(docs) = &feats else {
                unreachable!()
            };
            let model =
                train_shallow_text(docs, &labels, dim, buckets, &train_cfg).map_err(data)?;
            ModelKind::ShallowText(model)
        }
        other => {
            return Err(CliError::Usage(format!(
                "--model must be linear, oneclass, pu, or shallow, got {other:?}"
            )))
        }
    };

    let bundle = ModelBundle::new(name, classifier, featurizer).map_err(data)?;
    let dir = args.out.parent().filter(|p| !p.as_os_str().is_empty());
    std::fs::create_dir_all(dir.unwrap_or_else(|| Path::new(".")))
        .map_err(|e| CliError::Data(format!("cannot create output directory: {e}")))?;
    let tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or_else(|| Path::new(".")))
        .map_err(|e| CliError::Data(format!("cannot create temp file: {e}")))?;
    save_model(&bundle, tmp.path()).map_err(data)?;
    tmp.persist(&args.out)
        .map_err(|e| CliError::Data(format!("cannot persist {}: {e}", args.out.display())))?;
    eprintln!(
        "trained {} [{}] on {} records -> {}",
        bundle.classifier.kind_tag(),
        bundle.featurizer.label(),
        corpus.len(),
        args.out.display()
    );
    Ok(())
}

fn report_format(flag: &Option<String>, default: ReportFormat) -> Result<ReportFormat, CliError> {
    match flag {
        None => Ok(default),
        Some(token) => ReportFormat::parse(token)
            .ok_or_else(|| CliError::Usage(format!("--out-format must be csv or markdown, got {token:?}"))),
    }
}

fn evaluate(args: EvaluateArgs, _config: &Config) -> Result<(), CliError> {
    let corpus = load_input(&args.input, &args.format)?;
    let mut rows = Vec::new();
    for path in &args.models {
        let bundle = load_model(path).map_err(data)?;
        let eval = evaluate_bundle(&bundle, &corpus).map_err(data)?;
        eprintln!(
            "{}: accuracy {:.4} on {} records",
            bundle.name,
            eval.metrics.accuracy,
            corpus.len()
        );
        rows.push(PerformanceRow {
            feature_model: bundle.featurizer.label(),
            classifier: bundle.classifier.kind_tag().to_string(),
            confusion: eval.confusion,
            metrics: eval.metrics,
        });
    }
    let format = report_format(&args.out_format, ReportFormat::Csv)?;
    write_atomic(&args.out, render_performance(&rows, format).as_bytes())?;
    eprintln!("wrote metrics to {}", args.out.display());
    Ok(())
}

fn load_resources(
    thesaurus: &Option<PathBuf>,
    lexicon: &Option<PathBuf>,
    homoglyphs: &Option<PathBuf>,
    leet: &Option<PathBuf>,
) -> Result<AttackResources, CliError> {
    Ok(AttackResources {
        thesaurus: thesaurus
            .as_ref()
            .map(|p| Thesaurus::load(p))
            .transpose()
            .map_err(data)?,
        lexicon: Some(match lexicon {
            Some(p) => SynonymLexicon::load(p).map_err(data)?,
            None => SynonymLexicon::bundled(),
        }),
        homoglyphs: Some(match homoglyphs {
            Some(p) => HomoglyphTable::load(p).map_err(data)?,
            None => HomoglyphTable::bundled(),
        }),
        leet: Some(match leet {
            Some(p) => LeetTable::load(p).map_err(data)?,
            None => LeetTable::bundled(),
        }),
    })
}

fn require_thesaurus_flag(kinds: &[AttackKind], resources: &AttackResources) -> Result<(), CliError> {
    let needs = kinds.iter().any(|k| *k != AttackKind::Eda);
    if needs && resources.thesaurus.is_none() {
        return Err(CliError::Usage(
            "--thesaurus is required for every attack kind except eda".into(),
        ));
    }
    Ok(())
}

fn parse_attack_kind(token: &str) -> Result<AttackKind, CliError> {
    AttackKind::parse(token).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown attack kind {token:?}; expected paraphrase, eda, homograph, spacing, charswap, or hybrid"
        ))
    })
}

fn attack(args: AttackArgs, config: &Config) -> Result<(), CliError> {
    let corpus = load_input(&args.input, &args.format)?;
    let kind = parse_attack_kind(&args.kind)?;
    let master_seed = config.resolve_seed(args.seed)?;
    let resources = load_resources(&args.thesaurus, &args.lexicon, &args.homoglyphs, &args.leet)?;
    require_thesaurus_flag(&[kind], &resources)?;

    let mut cfg = AttackConfig::new(kind, master_seed);
    cfg.eda_rate = config.f64_or(args.eda_rate, "eda_rate", 0.1)?;
    if let Some(op) = config.string(args.eda_op.clone(), "eda_op")? {
        cfg.eda_op = Some(match op.as_str() {
            "delete" => EdaOp::Delete,
            "swap" => EdaOp::Swap,
            "replace" => EdaOp::Replace,
            "insert" => EdaOp::Insert,
            other => {
                return Err(CliError::Usage(format!(
                    "--eda-op must be delete, swap, replace, or insert, got {other:?}"
                )))
            }
        });
    }
    if !args.charswap_ops.is_empty() {
        cfg.charswap_ops = args
            .charswap_ops
            .iter()
            .map(|t| match t.as_str() {
                "substitute" | "sub" => Ok(CharswapOp::Substitute),
                "delete" | "del" => Ok(CharswapOp::Delete),
                "insert" | "ins" => Ok(CharswapOp::Insert),
                "swap" => Ok(CharswapOp::Swap),
                other => Err(CliError::Usage(format!(
                    "unknown charswap op {other:?}; expected substitute, delete, insert, or swap"
                ))),
            })
            .collect::<Result<_, _>>()?;
    }

    let mut perturbed = Corpus::new(format!("{}:{}", corpus.provenance(), kind.as_str()));
    let mut changed = 0usize;
    for record in corpus.records() {
        let mut record_cfg = cfg.clone();
        record_cfg.seed = derive_seed(master_seed, &record.id);
        let result = apply_attack(&record.text, &record_cfg, &resources).map_err(data)?;
        if !result.edits.is_empty() {
            changed += 1;
        }
        let mut rec = SmsRecord::new(
            record.id.clone(),
            result.perturbed,
            record.label,
            record.source.clone(),
        );
        rec.language = record.language.clone();
        perturbed.push(rec).map_err(data)?;
    }
    eprintln!("{} perturbed {changed} of {} records", kind.as_str(), corpus.len());
    save_corpus_atomic(&perturbed, &args.out)
}

fn robustness(args: RobustnessArgs, config: &Config) -> Result<(), CliError> {
    let holdout = load_input(&args.input, &args.format)?;
    let master_seed = config.resolve_seed(args.seed)?;
    let mut kinds: Vec<AttackKind> = Vec::new();
    for token in &args.attacks {
        if token == "all" {
            kinds.extend(AttackKind::REPORT_ORDER);
        } else {
            kinds.push(parse_attack_kind(token)?);
        }
    }
    let mut seen = std::collections::HashSet::new();
    kinds.retain(|k| seen.insert(*k));
    let resources = load_resources(&args.thesaurus, &args.lexicon, &args.homoglyphs, &args.leet)?;
    require_thesaurus_flag(&kinds, &resources)?;

    let eda_rate = config.f64_or(args.eda_rate, "eda_rate", 0.1)?;
    let attacks: Vec<AttackConfig> = kinds
        .iter()
        .map(|k| {
            let mut cfg = AttackConfig::new(*k, master_seed);
            cfg.eda_rate = eda_rate;
            cfg
        })
        .collect();

    let mut models = Vec::new();
    for path in &args.models {
        models.push(load_model(path).map_err(data)?);
    }
    let matrix = robustness_eval(&models, &holdout, &attacks, &resources, master_seed).map_err(data)?;
    for row in &matrix.rows {
        eprintln!(
            "{} + {}: actual accuracy {:.4}",
            row.classifier, row.feature_model, row.actual.accuracy
        );
    }
    let format = report_format(&args.out_format, ReportFormat::Csv)?;
    write_atomic(&args.out, render_robustness(&matrix, format).as_bytes())?;
    eprintln!("wrote robustness matrix to {}", args.out.display());
    Ok(())
}

fn report(args: ReportArgs, _config: &Config) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", args.input.display())))?;
    let format = ReportFormat::parse(&args.format).ok_or_else(|| {
        CliError::Usage(format!("--format must be csv or markdown, got {:?}", args.format))
    })?;
    let header = text.lines().next().unwrap_or("").trim();
    let rendered = if header.starts_with("feature_model,classifier,attack,") {
        render_robustness(&parse_robustness_csv(&text).map_err(data)?, format)
    } else if header.starts_with("feature_model,classifier,precision,") {
        render_performance(&parse_performance_csv(&text).map_err(data)?, format)
    } else {
        return Err(CliError::Data(format!(
            "{}:1: unrecognized report header",
            args.input.display()
        )));
    };
    match &args.out {
        Some(path) => {
            write_atomic(path, rendered.as_bytes())?;
            eprintln!("wrote report to {}", path.display());
        }
        None => print!("{rendered}"),
    }
    Ok(())
}
