//! Extraction of stand-off NIF corpora from rendered wiki-style HTML.
//!
//! The pipeline turns one HTML article into a [`model::NifDocument`]: the
//! article text accumulated in document order, with sections, paragraphs,
//! titles and links anchored by exact code-point offsets. Documents can be
//! enriched with additional links over unlinked re-occurrences of anchors
//! already linked in the article, serialized to N-Triples or Turtle, parsed
//! back, validated against the offset and structure rules, and summarized.
//!
//! Stages:
//!
//! * [`profile`]/[`cleaner`] — CSS-selector-driven HTML cleansing
//! * [`extractor`] — structure and link extraction with exact offsets
//! * [`model`] — the NIF document model and URI minting
//! * [`enricher`] — longest-anchor-first link enrichment
//! * [`rdf`] — deterministic N-Triples/Turtle serialization and parsing
//! * [`validator`] — syntactic validity battery
//! * [`stats`] — corpus statistics and Fleiss' kappa
//! * [`pipeline`] — batch orchestration (parallel with the `parallel`
//!   feature, sequential otherwise)

pub mod cleaner;
pub mod enricher;
pub mod error;
pub mod extractor;
pub mod model;
pub mod pipeline;
pub mod profile;
pub mod rdf;
pub mod stats;
pub mod text;
pub mod validator;

pub use error::{Error, Result};
