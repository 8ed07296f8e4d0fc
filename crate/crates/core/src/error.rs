use std::io;

use thiserror::Error;

/// Errors produced by the extraction, enrichment and validation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("profile is not valid JSON: {0}")]
    ProfileJson(#[from] serde_json::Error),

    #[error("invalid CSS selector {selector:?}")]
    InvalidSelector { selector: String },

    #[error("input document is empty")]
    EmptyInput,

    #[error("extraction failed: {0}")]
    Extraction(String),

    #[error("invalid span: begin {begin} > end {end}")]
    InvalidSpan { begin: usize, end: usize },

    #[error("invalid article metadata: {0}")]
    InvalidMeta(String),

    #[error("empty anchor text")]
    EmptyAnchor,

    #[error("N-Triples syntax error at line {line}: {detail}")]
    Syntax { line: usize, detail: String },

    #[error("line {line}: offset is not a non-negative integer: {detail}")]
    InvalidOffset { line: usize, detail: String },

    #[error("no context found for {uri}")]
    MissingContext { uri: String },

    #[error("annotation count regressed: after {after} < before {before}")]
    CountRegression { before: u64, after: u64 },

    #[error("invalid judgment matrix: {0}")]
    InvalidMatrix(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
