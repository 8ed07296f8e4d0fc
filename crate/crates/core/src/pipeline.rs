//! Batch orchestration over independent articles.
//!
//! Every stage is a pure function of one article, so batches parallelize
//! with no coordination: with the default `parallel` feature the batch maps
//! over a rayon pool, without it the same entry point runs sequentially.
//! Results keep input order either way, so output bytes do not depend on
//! the worker count. [`process_batch_sequential`] is always available for
//! comparison.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::cleaner::clean;
use crate::enricher::{enrich, EnrichmentReport, ExclusionList};
use crate::error::Result;
use crate::extractor::{extract_with_diagnostics, ExtractDiagnostics};
use crate::model::{ArticleMeta, NifDocument};
use crate::profile::CleaningProfile;

/// One article's raw input: the article name (usually the input file stem)
/// and its rendered HTML.
#[derive(Debug, Clone)]
pub struct ArticleSource {
    pub name: String,
    pub html: String,
}

/// Run `f` on a dedicated pool of `workers` threads. Without the `parallel`
/// feature the closure runs inline and the worker count is ignored.
#[cfg(feature = "parallel")]
pub fn with_worker_count<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
    {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Sequential build: the closure runs inline.
#[cfg(not(feature = "parallel"))]
pub fn with_worker_count<T: Send>(_workers: usize, f: impl FnOnce() -> T + Send) -> T {
    f()
}

/// Batch settings shared by all workers.
#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub language: String,
    pub corpus_version: String,
    /// Run enrichment after extraction.
    pub enrich: bool,
    pub exclusions: ExclusionList,
}

impl PipelineOptions {
    pub fn new(language: &str, corpus_version: &str) -> Self {
        PipelineOptions {
            language: language.to_string(),
            corpus_version: corpus_version.to_string(),
            enrich: false,
            exclusions: ExclusionList::default(),
        }
    }
}

/// One article's pipeline output.
#[derive(Debug, Clone)]
pub struct ProcessedArticle {
    pub document: NifDocument,
    pub enrichment: Option<EnrichmentReport>,
    pub diagnostics: ExtractDiagnostics,
}

/// Clean, extract and optionally enrich one article.
pub fn process_article(
    source: &ArticleSource,
    profile: &CleaningProfile,
    opts: &PipelineOptions,
) -> Result<ProcessedArticle> {
    let meta = ArticleMeta::new(&source.name, &opts.language, &opts.corpus_version)?;
    let cleaned = clean(&source.html, profile, &meta.source_url)?;
    let (document, diagnostics) = extract_with_diagnostics(&cleaned, &meta)?;
    if opts.enrich {
        let (document, report) = enrich(&document, &opts.exclusions)?;
        Ok(ProcessedArticle {
            document,
            enrichment: Some(report),
            diagnostics,
        })
    } else {
        Ok(ProcessedArticle {
            document,
            enrichment: None,
            diagnostics,
        })
    }
}

/// Process a batch of articles, in parallel when the `parallel` feature is
/// enabled. The result vector matches the input order.
#[cfg(feature = "parallel")]
pub fn process_batch(
    sources: &[ArticleSource],
    profile: &CleaningProfile,
    opts: &PipelineOptions,
) -> Vec<Result<ProcessedArticle>> {
    sources
        .par_iter()
        .map(|source| process_article(source, profile, opts))
        .collect()
}

/// Process a batch of articles sequentially (the `parallel` feature is
/// disabled).
#[cfg(not(feature = "parallel"))]
pub fn process_batch(
    sources: &[ArticleSource],
    profile: &CleaningProfile,
    opts: &PipelineOptions,
) -> Vec<Result<ProcessedArticle>> {
    process_batch_sequential(sources, profile, opts)
}

/// Sequential reference path, independent of the feature flag.
pub fn process_batch_sequential(
    sources: &[ArticleSource],
    profile: &CleaningProfile,
    opts: &PipelineOptions,
) -> Vec<Result<ProcessedArticle>> {
    sources
        .iter()
        .map(|source| process_article(source, profile, opts))
        .collect()
}

/// Enrich a batch of already-extracted documents, in parallel when the
/// `parallel` feature is enabled. Input order is preserved.
pub fn enrich_batch(
    docs: &[NifDocument],
    exclusions: &ExclusionList,
) -> Vec<Result<(NifDocument, EnrichmentReport)>> {
    #[cfg(feature = "parallel")]
    {
        docs.par_iter().map(|d| enrich(d, exclusions)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        docs.iter().map(|d| enrich(d, exclusions)).collect()
    }
}
