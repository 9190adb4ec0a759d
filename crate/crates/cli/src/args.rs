use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "smsgauntlet",
    version,
    about = "SMS spam classifiers and black-box adversarial robustness evaluation"
)]
pub struct Cli {
    /// JSON config file with flat keys mirroring the flags; explicit flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker parallelism cap; defaults to the number of logical cores.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Two-pass language filter plus exact-text deduplication.
    Clean(CleanArgs),
    /// Suggest labeling rules for each record (advisory only).
    LabelAssist(LabelAssistArgs),
    /// Split a labeled corpus into train/test plus an all-spam holdout.
    Split(SplitArgs),
    /// Rank the most frequent spam keywords into a thesaurus file.
    Thesaurus(ThesaurusArgs),
    /// Train a classifier and save it with its featurizer.
    Train(TrainArgs),
    /// Score saved models on a labeled corpus and report the metrics.
    Evaluate(EvaluateArgs),
    /// Perturb a corpus with one attack and save the result.
    Attack(AttackArgs),
    /// Full adversarial protocol: baseline column plus one column per attack.
    Robustness(RobustnessArgs),
    /// Re-render a metrics or robustness CSV as CSV or Markdown.
    Report(ReportArgs),
}

#[derive(Args)]
pub struct CleanArgs {
    /// Input corpus file.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Input format (tsv|csv); inferred from the extension when omitted.
    #[arg(long, value_name = "FMT")]
    pub format: Option<String>,
    /// Output corpus file.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    /// Directory of `<code>.profile` files overriding the bundled language
    /// profiles.
    #[arg(long, value_name = "DIR")]
    pub profile_dir: Option<PathBuf>,
    /// Skip the two-pass language filter.
    #[arg(long)]
    pub skip_language_filter: bool,
    /// Skip deduplication.
    #[arg(long)]
    pub skip_dedup: bool,
}

#[derive(Args)]
pub struct LabelAssistArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_name = "FMT")]
    pub format: Option<String>,
    /// Output CSV of fired rules per record.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct SplitArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_name = "FMT")]
    pub format: Option<String>,
    /// Fraction of the non-holdout remainder used for training.
    #[arg(long, value_name = "F")]
    pub train_frac: Option<f64>,
    /// Number of spam records reserved for the adversarial holdout.
    #[arg(long, value_name = "N")]
    pub holdout_spam: Option<usize>,
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Directory receiving train/test/holdout files.
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct ThesaurusArgs {
    /// Labeled corpus; only its spam records feed the thesaurus.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_name = "FMT")]
    pub format: Option<String>,
    /// Number of keywords to keep.
    #[arg(long, value_name = "K")]
    pub k: Option<usize>,
    /// Stopword file overriding the bundled English list.
    #[arg(long, value_name = "FILE")]
    pub stopwords: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct TrainArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_name = "FMT")]
    pub format: Option<String>,
    /// Classifier family: linear|oneclass|pu|shallow.
    #[arg(long, value_name = "KIND")]
    pub model: String,
    /// Feature model: tfidf|embedding (shallow embeds internally).
    #[arg(long, value_name = "KIND")]
    pub features: Option<String>,
    /// Loss for the linear model: hinge|logistic.
    #[arg(long, value_name = "LOSS")]
    pub loss: Option<String>,
    /// N-gram order for tf-idf features.
    #[arg(long, value_name = "N")]
    pub ngram: Option<usize>,
    /// Minimum document frequency for vocabulary terms.
    #[arg(long, value_name = "N")]
    pub min_df: Option<usize>,
    /// Pretrained embedding file (token v1 .. vd per line).
    #[arg(long, value_name = "FILE")]
    pub embeddings: Option<PathBuf>,
    /// Dimension of the embedding file.
    #[arg(long, value_name = "D")]
    pub embedding_dim: Option<usize>,
    /// Scale of the seeded normal OOV vectors.
    #[arg(long, value_name = "S")]
    pub oov_scale: Option<f64>,
    /// Stopword file overriding the bundled English list.
    #[arg(long, value_name = "FILE")]
    pub stopwords: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    pub epochs: Option<usize>,
    #[arg(long, value_name = "ETA")]
    pub lr: Option<f64>,
    /// L2 regularization strength.
    #[arg(long, value_name = "L")]
    pub lambda: Option<f64>,
    /// One-class outlier budget in (0,1].
    #[arg(long, value_name = "NU")]
    pub nu: Option<f64>,
    /// PU-bagging ensemble size.
    #[arg(long, value_name = "K")]
    pub bags: Option<usize>,
    /// Shallow-text embedding dimension.
    #[arg(long, value_name = "D")]
    pub dim: Option<usize>,
    /// Shallow-text hash bucket count.
    #[arg(long, value_name = "N")]
    pub buckets: Option<usize>,
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Disable per-epoch shuffling.
    #[arg(long)]
    pub no_shuffle: bool,
    /// Model name recorded in reports; defaults to the output file stem.
    #[arg(long, value_name = "NAME")]
    pub name: Option<String>,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct EvaluateArgs {
    /// Saved model files, comma separated.
    #[arg(long, value_name = "FILES", value_delimiter = ',', required = true)]
    pub models: Vec<PathBuf>,
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_name = "FMT")]
    pub format: Option<String>,
    /// Report format: csv|markdown.
    #[arg(long, value_name = "FMT")]
    pub out_format: Option<String>,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct AttackArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_name = "FMT")]
    pub format: Option<String>,
    /// Attack kind: paraphrase|eda|homograph|spacing|charswap|hybrid.
    #[arg(long, value_name = "KIND")]
    pub kind: String,
    /// Thesaurus file (required by every kind except eda).
    #[arg(long, value_name = "FILE")]
    pub thesaurus: Option<PathBuf>,
    /// Synonym lexicon file; bundled table when omitted.
    #[arg(long, value_name = "FILE")]
    pub lexicon: Option<PathBuf>,
    /// Homoglyph table file; bundled table when omitted.
    #[arg(long, value_name = "FILE")]
    pub homoglyphs: Option<PathBuf>,
    /// Leet table file; bundled table when omitted.
    #[arg(long, value_name = "FILE")]
    pub leet: Option<PathBuf>,
    /// EDA perturbation rate alpha in (0,1].
    #[arg(long, value_name = "A")]
    pub eda_rate: Option<f64>,
    /// Fix the EDA operation: delete|swap|replace|insert.
    #[arg(long, value_name = "OP")]
    pub eda_op: Option<String>,
    /// Enabled charswap operations, comma separated:
    /// substitute|delete|insert|swap.
    #[arg(long, value_name = "OPS", value_delimiter = ',')]
    pub charswap_ops: Vec<String>,
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct RobustnessArgs {
    /// Saved model files, comma separated.
    #[arg(long, value_name = "FILES", value_delimiter = ',', required = true)]
    pub models: Vec<PathBuf>,
    /// All-spam holdout corpus.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_name = "FMT")]
    pub format: Option<String>,
    /// Attacks to run, comma separated, or `all`.
    #[arg(long, value_name = "KINDS", value_delimiter = ',', required = true)]
    pub attacks: Vec<String>,
    #[arg(long, value_name = "FILE")]
    pub thesaurus: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub lexicon: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub homoglyphs: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub leet: Option<PathBuf>,
    #[arg(long, value_name = "A")]
    pub eda_rate: Option<f64>,
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Report format: csv|markdown.
    #[arg(long, value_name = "FMT")]
    pub out_format: Option<String>,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ReportArgs {
    /// A metrics or robustness CSV produced by evaluate/robustness.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Output format: csv|markdown.
    #[arg(long, value_name = "FMT")]
    pub format: String,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}
