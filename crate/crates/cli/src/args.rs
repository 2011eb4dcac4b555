use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kwbench::embed::SelectionMode;
use kwbench::eval::MacroMode;
use kwbench::prediction::Rank;
use kwbench::Scenario;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser, Serialize)]
#[command(name = "kwbench", version, about = "Keyword extraction benchmark runner")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads for per-document stages (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Keyword vocabulary statistics of a corpus.
    Stats(StatsArgs),
    /// Assign documents to train/test (and optional dev) folds.
    Split(SplitArgs),
    /// Run a native extractor over a corpus.
    Extract(ExtractArgs),
    /// Score prediction files against the test fold.
    Evaluate(EvaluateArgs),
    /// Render a TSV table from stored evaluation JSON.
    Report(ReportArgs),
    /// Run a native extractor over plain text files.
    Transfer(TransferArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CorpusArgs {
    #[arg(long)]
    pub corpus: PathBuf,

    /// Skip malformed lines instead of failing on the first one.
    #[arg(long)]
    pub skip_invalid: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct StatsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub corpus: CorpusArgs,

    /// Also count keywords assigned to at least N documents (comma list).
    #[arg(long, value_delimiter = ',')]
    pub min_docs: Vec<usize>,

    /// Also report statistics over the documents of each fold.
    #[arg(long)]
    pub split: Option<PathBuf>,

    /// Write JSON here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMethod {
    /// Iterative stratification plus swap refinement.
    Stratified,
    /// Iterative stratification only.
    Iterative,
    Random,
}

#[derive(Debug, Args, Serialize)]
pub struct SplitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub corpus: CorpusArgs,

    /// Fold ratios as name=value pairs.
    #[arg(long, default_value = "train=0.7,test=0.3")]
    pub ratios: String,

    #[arg(long, value_enum, default_value_t = SplitMethod::Stratified)]
    pub method: SplitMethod,

    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopwordLang {
    Pl,
    En,
    Both,
    None,
}

#[derive(Debug, Args, Serialize)]
pub struct TextArgs {
    /// Stopword file (one word per line, '#' comments); replaces the bundled list.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,

    /// Bundled stopword list used when no file is given.
    #[arg(long, value_enum, default_value_t = StopwordLang::Both)]
    pub stopword_lang: StopwordLang,

    /// Read the lemma_text field when a document has one.
    #[arg(long)]
    pub use_lemmas: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Tfidf,
    Textrank,
    Firstphrases,
    Cvalue,
    Ncvalue,
    Keybert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorFormat {
    /// `.jsonl` means precomputed vectors, anything else word vectors.
    Auto,
    Text,
    Jsonl,
}

#[derive(Debug, Args, Serialize)]
pub struct MethodArgs {
    #[arg(long, value_enum)]
    pub method: Method,

    /// Keywords per document: a positive number or "all".
    #[arg(long, default_value = "10")]
    pub k: Rank,

    /// Longest candidate phrase in tokens.
    #[arg(long, default_value_t = kwbench::candidates::DEFAULT_MAX_LEN)]
    pub max_len: usize,

    /// Shortest n-gram for tfidf and keybert.
    #[arg(long, default_value_t = 1)]
    pub ngram_min: usize,

    /// Longest n-gram for tfidf (keybert uses --keybert-ngram-max).
    #[arg(long, default_value_t = 3)]
    pub ngram_max: usize,

    #[arg(long, default_value_t = 4)]
    pub window: usize,

    #[arg(long, default_value_t = 0.85)]
    pub damping: f64,

    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,

    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,

    #[arg(long, default_value_t = kwbench::stat::DEFAULT_ALPHA)]
    pub alpha: f64,

    #[arg(long, default_value_t = kwbench::stat::DEFAULT_BETA)]
    pub beta: f64,

    /// Context window for NC-value, tokens on each side.
    #[arg(long, default_value_t = kwbench::stat::DEFAULT_CONTEXT_WINDOW)]
    pub context_window: usize,

    /// Vector file for keybert.
    #[arg(long)]
    pub vectors: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = VectorFormat::Auto)]
    pub vector_format: VectorFormat,

    /// Give unknown words a zero vector instead of skipping them.
    #[arg(long)]
    pub zero_fallback: bool,

    #[arg(long, default_value = "mmr")]
    pub selection: SelectionMode,

    #[arg(long, default_value_t = kwbench::embed::DEFAULT_DIVERSITY)]
    pub diversity: f64,

    /// Candidate pool for MSS.
    #[arg(long, default_value_t = kwbench::embed::DEFAULT_POOL)]
    pub pool: usize,

    #[arg(long, default_value_t = 2)]
    pub keybert_ngram_max: usize,

    #[command(flatten)]
    #[serde(flatten)]
    pub text: TextArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ExtractArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub corpus: CorpusArgs,

    /// Split file; tfidf then takes document frequencies from the train fold.
    #[arg(long)]
    pub split: Option<PathBuf>,

    /// Only emit predictions for documents of this fold (needs --split).
    #[arg(long, requires = "split")]
    pub fold: Option<String>,

    #[command(flatten)]
    #[serde(flatten)]
    pub method: MethodArgs,

    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct TransferArgs {
    /// Plain UTF-8 text files or directories of them; id = file name.
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,

    /// Corpus for tfidf document frequencies; default is the input files.
    #[arg(long)]
    pub idf_corpus: Option<PathBuf>,

    #[command(flatten)]
    #[serde(flatten)]
    pub method: MethodArgs,

    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct EvaluateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub corpus: CorpusArgs,

    #[arg(long)]
    pub split: PathBuf,

    /// Prediction files; each becomes one method block.
    #[arg(long, required = true, num_args = 1..)]
    pub predictions: Vec<PathBuf>,

    /// full_vocab, min_freq_N or train_vocab_restricted (comma list).
    #[arg(long, value_delimiter = ',', default_value = "full_vocab")]
    pub scenario: Vec<Scenario>,

    #[arg(long, value_delimiter = ',', default_value = "1,3,5")]
    pub ranks: Vec<Rank>,

    #[arg(long, default_value = "label_gold_only")]
    pub macro_mode: MacroMode,

    /// In min_freq scenarios also drop predicted labels below the threshold.
    #[arg(long)]
    pub filter_predictions: bool,

    /// Treat '_' in predicted keywords as a space.
    #[arg(long)]
    pub underscores_as_spaces: bool,

    /// Compute metrics in exact rational arithmetic before rounding.
    #[arg(long)]
    pub exact: bool,

    /// TSV report path.
    #[arg(long)]
    pub output: PathBuf,

    /// JSON report path (default: the TSV path with a .json extension).
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    /// JSON written by evaluate.
    #[arg(long)]
    pub input: PathBuf,

    /// Write TSV here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}
