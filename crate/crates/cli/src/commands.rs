//! Subcommand implementations. Logging goes to standard error; data goes to
//! the output file or standard output only.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use nif_forge_core::enricher::{EnrichmentReport, ExclusionList};
use nif_forge_core::model::NifDocument;
use nif_forge_core::pipeline::{
    enrich_batch, process_batch, with_worker_count, ArticleSource, PipelineOptions,
};
use nif_forge_core::profile::CleaningProfile;
use nif_forge_core::rdf::{parse, serialize_corpus, SerializeOptions};
use nif_forge_core::stats::{
    fleiss_kappa, summarize, JudgmentMatrix, ENRICHMENT_TSV_HEADER, SUMMARY_TSV_HEADER,
};
use nif_forge_core::validator::validate_corpus;

use crate::{
    EnrichArgs, ExtractArgs, FetchArgs, ReportStyle, StatsArgs, ValidateArgs, PROFILE_DIR_ENV,
};

/// Load the effective profile: an explicit file wins outright, otherwise the
/// wildcard and language profiles from the profile directory are merged.
fn load_effective_profile(explicit: Option<&Path>, lang: &str) -> Result<CleaningProfile> {
    if let Some(path) = explicit {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read profile {}", path.display()))?;
        let mut profile = CleaningProfile::from_json(&text)
            .with_context(|| format!("invalid profile {}", path.display()))?;
        if profile.language == "*" {
            profile.language = lang.to_string();
        }
        return Ok(profile);
    }
    let dir = std::env::var(PROFILE_DIR_ENV).unwrap_or_else(|_| "profiles".to_string());
    let dir = PathBuf::from(dir);
    let load = |path: PathBuf, fallback: &str| -> Result<CleaningProfile> {
        if path.is_file() {
            let text = fs::read_to_string(&path)
                .with_context(|| format!("cannot read profile {}", path.display()))?;
            CleaningProfile::from_json(&text)
                .with_context(|| format!("invalid profile {}", path.display()))
        } else {
            Ok(CleaningProfile::empty(fallback))
        }
    };
    let wildcard = load(dir.join("default.json"), "*")?;
    let mut language = load(dir.join(format!("{lang}.json")), lang)?;
    language.language = lang.to_string();
    if wildcard.search.is_empty() && wildcard.remove.is_empty() && language.search.is_empty() {
        eprintln!(
            "nif-forge: warning: no usable profile under {} for language {lang}; cleaning is the identity",
            dir.display()
        );
    }
    Ok(CleaningProfile::merge(&wildcard, &language))
}

fn read_article_sources(input: &Path) -> Result<Vec<ArticleSource>> {
    let mut files: Vec<PathBuf> = Vec::new();
    if input.is_dir() {
        for entry in fs::read_dir(input)
            .with_context(|| format!("cannot read input directory {}", input.display()))?
        {
            let path = entry?.path();
            let is_html = path
                .extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| e.eq_ignore_ascii_case("html") || e.eq_ignore_ascii_case("htm"));
            if path.is_file() && is_html {
                files.push(path);
            }
        }
    } else if input.is_file() {
        files.push(input.to_path_buf());
    } else {
        bail!("input {} does not exist", input.display());
    }
    // Deterministic processing order regardless of directory enumeration.
    files.sort();
    files
        .into_iter()
        .map(|path| {
            let name = path
                .file_stem()
                .and_then(|s| s.to_str())
                .map(|s| s.to_string())
                .with_context(|| format!("file name {} is not valid UTF-8", path.display()))?;
            let html = fs::read_to_string(&path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            Ok(ArticleSource { name, html })
        })
        .collect()
}

fn write_corpus(
    docs: &[NifDocument],
    output: &Path,
    format: nif_forge_core::rdf::RdfFormat,
    opts: SerializeOptions,
) -> Result<bool> {
    let to_stdout = output == Path::new("-");
    if to_stdout {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        serialize_corpus(docs, format, &mut lock, opts)?;
        lock.flush()?;
    } else {
        let mut file = fs::File::create(output)
            .with_context(|| format!("cannot create {}", output.display()))?;
        serialize_corpus(docs, format, &mut file, opts)?;
        file.flush()?;
    }
    Ok(to_stdout)
}

/// Print a data table either to stdout (when the corpus went to a file) or
/// to stderr (when the corpus went to stdout).
fn print_table(to_stderr: bool, lines: &[String]) {
    for line in lines {
        if to_stderr {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }
}

pub fn extract(args: ExtractArgs) -> Result<ExitCode> {
    let profile = load_effective_profile(args.profile.as_deref(), &args.lang)?;
    let sources = read_article_sources(&args.input)?;
    if sources.is_empty() {
        eprintln!(
            "nif-forge: warning: no HTML articles under {}",
            args.input.display()
        );
    }
    let mut opts = PipelineOptions::new(&args.lang, &args.dbpv);
    opts.exclusions = ExclusionList::new(profile.effective_excluded_sections());

    let results = with_worker_count(args.workers, || process_batch(&sources, &profile, &opts));

    let mut docs = Vec::new();
    let mut failures = 0usize;
    for (source, result) in sources.iter().zip(results) {
        match result {
            Ok(processed) => docs.push(processed.document),
            Err(err) => {
                failures += 1;
                eprintln!("nif-forge: article {} failed: {err}", source.name);
            }
        }
    }
    if !sources.is_empty() && docs.is_empty() {
        bail!("all {failures} article(s) failed");
    }

    let stdout_used = write_corpus(
        &docs,
        &args.output,
        args.format.into(),
        SerializeOptions::default(),
    )?;
    let summary = summarize(docs.iter());
    print_table(
        stdout_used,
        &[
            SUMMARY_TSV_HEADER.to_string(),
            nif_forge_core::stats::summary_tsv_row(&args.lang, &summary),
        ],
    );
    if failures > 0 {
        eprintln!(
            "nif-forge: {failures} article(s) failed, {} extracted",
            docs.len()
        );
    }
    Ok(ExitCode::SUCCESS)
}

pub fn enrich(args: EnrichArgs) -> Result<ExitCode> {
    let file = fs::File::open(&args.input)
        .with_context(|| format!("cannot open {}", args.input.display()))?;
    let docs = parse(BufReader::new(file))
        .with_context(|| format!("cannot parse corpus {}", args.input.display()))?;

    let lang = args
        .lang
        .clone()
        .or_else(|| docs.first().map(|d| d.meta.language.clone()))
        .unwrap_or_else(|| "en".to_string());
    let profile = load_effective_profile(args.profile.as_deref(), &lang)?;
    let exclusions = ExclusionList::new(profile.effective_excluded_sections());

    let results = with_worker_count(args.workers, || enrich_batch(&docs, &exclusions));
    let mut enriched_docs = Vec::with_capacity(docs.len());
    let mut aggregate = EnrichmentReport::empty();
    for result in results {
        let (doc, report) = result?;
        aggregate = aggregate.merge(&report);
        enriched_docs.push(doc);
    }

    let opts = SerializeOptions {
        mark_enriched: args.mark_enriched,
    };
    let stdout_used = write_corpus(&enriched_docs, &args.output, args.format.into(), opts)?;
    print_table(
        stdout_used,
        &[
            ENRICHMENT_TSV_HEADER.to_string(),
            nif_forge_core::stats::enrichment_tsv_row(&lang, &aggregate),
        ],
    );
    Ok(ExitCode::SUCCESS)
}

pub fn validate(args: ValidateArgs) -> Result<ExitCode> {
    let report = validate_corpus(&args.input)?;
    match args.report {
        ReportStyle::Jsonl => {
            for v in &report.violations {
                println!("{}", v.to_json());
            }
        }
        ReportStyle::Text => {
            for v in &report.violations {
                println!("{v}");
            }
            println!(
                "checked {} triple(s), {} violation(s), {} dropped code point sequence(s)",
                report.checked_triples,
                report.violations.len(),
                report.dropped_codepoints
            );
        }
    }
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::FAILURE)
    }
}

pub fn stats(args: StatsArgs) -> Result<ExitCode> {
    if args.input.is_none() && args.kappa.is_none() {
        bail!("stats needs --input and/or --kappa");
    }
    if let Some(path) = &args.kappa {
        let file =
            fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        let matrix = JudgmentMatrix::from_csv(BufReader::new(file))?;
        println!("fleiss_kappa\t{:.4}", fleiss_kappa(&matrix));
    }
    if let Some(path) = &args.input {
        let file =
            fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        let docs = parse(BufReader::new(file))
            .with_context(|| format!("cannot parse corpus {}", path.display()))?;
        let mut by_language: BTreeMap<String, Vec<&NifDocument>> = BTreeMap::new();
        for doc in &docs {
            by_language
                .entry(doc.meta.language.clone())
                .or_default()
                .push(doc);
        }
        println!("{SUMMARY_TSV_HEADER}");
        for (lang, group) in &by_language {
            let summary = summarize(group.iter().copied());
            println!("{}", nif_forge_core::stats::summary_tsv_row(lang, &summary));
        }
        if by_language.len() > 1 {
            let total = summarize(docs.iter());
            println!(
                "{}",
                nif_forge_core::stats::summary_tsv_row("Total", &total)
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn fetch(args: FetchArgs) -> Result<ExitCode> {
    fs::create_dir_all(&args.output)
        .with_context(|| format!("cannot create {}", args.output.display()))?;
    let mut client = crate::fetch::Fetcher::new(&args.endpoint, args.rate)?;
    let mut failed = 0usize;
    for title in &args.titles {
        match client.fetch(title) {
            Ok(html) => {
                let path = args.output.join(format!("{title}.html"));
                fs::write(&path, html)
                    .with_context(|| format!("cannot write {}", path.display()))?;
                eprintln!("nif-forge: fetched {title}");
            }
            Err(err) => {
                failed += 1;
                eprintln!("nif-forge: fetch of {title} failed: {err}");
            }
        }
    }
    if failed > 0 {
        eprintln!("nif-forge: {failed} title(s) permanently failed");
        Ok(ExitCode::FAILURE)
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
