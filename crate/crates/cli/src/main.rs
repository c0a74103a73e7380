mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Tokenize {
    /// Input is already tokenized; split on whitespace.
    #[default]
    None,
    /// Split punctuation off words.
    Simple,
}

fn version() -> &'static str {
    static V: std::sync::OnceLock<String> = std::sync::OnceLock::new();
    V.get_or_init(|| {
        format!(
            "{} (record format {})",
            env!("CARGO_PKG_VERSION"),
            docpara_core::pipeline::FORMAT_VERSION
        )
    })
}

#[derive(Debug, Parser)]
#[command(name = "docpara", version = version(), about = "Parallel paragraph extraction and MT evaluation")]
pub struct Cli {
    /// Output format for reports printed to stdout.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    pub format: Format,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Extract and clean parallel paragraphs from document pairs and alignments.
    Extract(ExtractArgs),
    /// Corpus statistics and paragraph-length distribution.
    Stats(StatsArgs),
    /// Render the funnel table from a run manifest.
    Funnel(FunnelArgs),
    /// Seeded train/dev/test split of an extracted corpus.
    Split(SplitArgs),
    /// Corpus BLEU of a hypothesis file against a reference file.
    Bleu(BleuArgs),
    /// Paired bootstrap significance test between two systems.
    Bootstrap(BootstrapArgs),
    /// Contrastive pronoun accuracy from candidate scores.
    Contrapro(ContraproArgs),
    /// Train a language profile from a text sample.
    LangidTrain(LangidTrainArgs),
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Document-pair records (TSV, optionally .gz or .xz).
    #[arg(long)]
    pub docs: PathBuf,
    /// Sentence alignments with '#pair <id>' headers.
    #[arg(long)]
    pub alignments: PathBuf,
    /// Output JSONL of paragraph records.
    #[arg(long)]
    pub out: PathBuf,
    /// Run manifest path [default: <out>.manifest.json].
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Config file of 'key = value' lines.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = ["raw", "presegmented"])]
    pub mode: Option<String>,
    #[arg(long, value_parser = ["abort", "skip"])]
    pub on_error: Option<String>,
    #[arg(long)]
    pub min_words: Option<usize>,
    #[arg(long)]
    pub overlap_threshold: Option<f64>,
    #[arg(long, value_parser = ["exact", "lsh"])]
    pub overlap_method: Option<String>,
    #[arg(long)]
    pub src_lang: Option<String>,
    #[arg(long)]
    pub tgt_lang: Option<String>,
    #[arg(long)]
    pub profiles_dir: Option<PathBuf>,
    #[arg(long)]
    pub abbreviations_dir: Option<PathBuf>,
    /// Any config key, e.g. --set shingle_size=4. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Print every stage counter instead of the three-row summary.
    #[arg(long)]
    pub detailed: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// JSONL corpora; each becomes one row, named after the file stem.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value = "en")]
    pub src_lang: String,
    #[arg(long, default_value = "de")]
    pub tgt_lang: String,
}

#[derive(Debug, Args)]
pub struct FunnelArgs {
    pub manifest: PathBuf,
    #[arg(long)]
    pub detailed: bool,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Directory receiving train.jsonl, dev.jsonl and test.jsonl.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub dev: Option<usize>,
    #[arg(long)]
    pub test: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BleuArgs {
    #[arg(long)]
    pub hyp: PathBuf,
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long, value_enum, default_value_t = Tokenize::None)]
    pub tokenize: Tokenize,
}

#[derive(Debug, Args)]
pub struct BootstrapArgs {
    /// Hypotheses of system A (the system claimed to be better).
    #[arg(long)]
    pub hyp_a: PathBuf,
    #[arg(long)]
    pub hyp_b: PathBuf,
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub resamples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Tokenize::None)]
    pub tokenize: Tokenize,
}

#[derive(Debug, Args)]
pub struct ContraproArgs {
    /// Test instances, one JSON object per line.
    #[arg(long)]
    pub instances: PathBuf,
    /// 'instance_id<TAB>candidate_index<TAB>log_score' lines.
    #[arg(long)]
    pub scores: PathBuf,
}

#[derive(Debug, Args)]
pub struct LangidTrainArgs {
    #[arg(long)]
    pub lang: String,
    #[arg(long)]
    pub sample: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

/// Bad flags, flag values or config files.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
