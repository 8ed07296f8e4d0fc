//! nif-forge: extract, enrich, validate and summarize stand-off NIF corpora
//! from rendered wiki HTML.

mod commands;
mod fetch;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nif_forge_core::rdf::RdfFormat;

/// Environment variable overriding the profile search directory.
pub const PROFILE_DIR_ENV: &str = "NIF_FORGE_PROFILE_DIR";

#[derive(Parser)]
#[command(
    name = "nif-forge",
    version,
    about = "Stand-off NIF corpus extraction, enrichment, validation and statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract a NIF corpus from a directory of rendered HTML articles
    /// (one article per file, file stem = article name).
    Extract(ExtractArgs),
    /// Add links over unlinked re-occurrences of anchors already linked in
    /// each article of an N-Triples corpus.
    Enrich(EnrichArgs),
    /// Run the syntactic validity battery over an N-Triples corpus.
    Validate(ValidateArgs),
    /// Print corpus statistics, or Fleiss' kappa for a judgment matrix.
    Stats(StatsArgs),
    /// Fetch rendered article HTML from an endpoint, rate limited.
    Fetch(FetchArgs),
}

#[derive(Args)]
pub struct ExtractArgs {
    /// Wiki language code (selects the profile and the resource namespace).
    #[arg(long)]
    lang: String,
    /// Corpus version tag carried in every minted URI.
    #[arg(long)]
    dbpv: String,
    /// Directory of HTML files (or a single HTML file).
    #[arg(long)]
    input: PathBuf,
    /// Output corpus file; `-` writes to standard output.
    #[arg(long)]
    output: PathBuf,
    /// Explicit profile file; replaces the merged default+language profile.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "nt")]
    format: RdfFormatArg,
    /// Worker threads.
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

#[derive(Args)]
pub struct EnrichArgs {
    /// Input N-Triples corpus produced by this tool.
    #[arg(long)]
    input: PathBuf,
    /// Output corpus file; `-` writes to standard output.
    #[arg(long)]
    output: PathBuf,
    /// Language for profile lookup; defaults to the corpus's first document.
    #[arg(long)]
    lang: Option<String>,
    /// Explicit profile file (for the enrichment exclusion list).
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "nt")]
    format: RdfFormatArg,
    /// Emit one provenance triple per enriched link.
    #[arg(long)]
    mark_enriched: bool,
    /// Worker threads.
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

#[derive(Args)]
pub struct ValidateArgs {
    /// N-Triples corpus to validate.
    #[arg(long)]
    input: PathBuf,
    /// Report style: human-readable text or JSON lines.
    #[arg(long, default_value = "text")]
    report: ReportStyle,
}

#[derive(Args)]
pub struct StatsArgs {
    /// N-Triples corpus to summarize.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Judgment matrix CSV (`item,cat1,...,catK`); prints Fleiss' kappa.
    #[arg(long)]
    kappa: Option<PathBuf>,
}

#[derive(Args)]
pub struct FetchArgs {
    /// Render endpoint; `{title}` in the URL is substituted, otherwise the
    /// title is appended as a path segment.
    #[arg(long)]
    endpoint: String,
    /// Requests per second.
    #[arg(long, default_value_t = 1.0)]
    rate: f64,
    /// Directory the rendered HTML is saved into.
    #[arg(long)]
    output: PathBuf,
    /// Article titles to fetch.
    #[arg(required = true)]
    titles: Vec<String>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
pub enum RdfFormatArg {
    Nt,
    Ttl,
}

impl From<RdfFormatArg> for RdfFormat {
    fn from(v: RdfFormatArg) -> RdfFormat {
        match v {
            RdfFormatArg::Nt => RdfFormat::NTriples,
            RdfFormatArg::Ttl => RdfFormat::Turtle,
        }
    }
}

#[derive(Clone, Copy, PartialEq, clap::ValueEnum)]
pub enum ReportStyle {
    Text,
    Jsonl,
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Extract(args) => commands::extract(args),
        Command::Enrich(args) => commands::enrich(args),
        Command::Validate(args) => commands::validate(args),
        Command::Stats(args) => commands::stats(args),
        Command::Fetch(args) => commands::fetch(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("nif-forge: error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
