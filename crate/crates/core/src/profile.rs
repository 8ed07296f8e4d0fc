//! Cleaning profiles: named sets of CSS selectors governing HTML cleansing.
//!
//! A profile is data, not code. It ships as a UTF-8 JSON file with the
//! schema
//!
//! ```json
//! {
//!   "language": "en",
//!   "search": ["h2", "p"],
//!   "remove": ["table.infobox"],
//!   "replace": [{"selector": "br", "replacement": "\n"}],
//!   "enrichment_excluded_sections": ["References"]
//! }
//! ```
//!
//! All keys are optional; unknown keys are rejected. The effective profile
//! for a language is the wildcard (`"*"`) profile merged with the language
//! profile, language entries appended after wildcard entries.

use scraper::Selector;
use serde::Deserialize;

use crate::error::{Error, Result};

/// A selector together with the source string it was parsed from.
#[derive(Debug, Clone)]
pub struct CompiledSelector {
    pub source: String,
    pub selector: Selector,
}

/// A replace rule: matched elements are substituted by a text node.
#[derive(Debug, Clone)]
pub struct ReplaceRule {
    pub selector: CompiledSelector,
    pub replacement: String,
}

/// Sections whose titles suppress enrichment by default.
pub const DEFAULT_EXCLUDED_SECTIONS: [&str; 5] = [
    "See also",
    "Notes",
    "Bibliography",
    "References",
    "External Links",
];

/// A named set of search/remove/replace selectors, immutable after load and
/// shareable across workers.
#[derive(Debug, Clone)]
pub struct CleaningProfile {
    /// Language code this profile applies to, or `"*"` for the wildcard.
    pub language: String,
    pub search: Vec<CompiledSelector>,
    pub remove: Vec<CompiledSelector>,
    pub replace: Vec<ReplaceRule>,
    /// Section titles excluded from enrichment; `None` means use
    /// [`DEFAULT_EXCLUDED_SECTIONS`].
    pub enrichment_excluded_sections: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    #[serde(default)]
    language: Option<String>,
    #[serde(default)]
    search: Vec<String>,
    #[serde(default)]
    remove: Vec<String>,
    #[serde(default)]
    replace: Vec<RawReplace>,
    #[serde(default)]
    enrichment_excluded_sections: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReplace {
    selector: String,
    replacement: String,
}

fn compile(source: &str) -> Result<CompiledSelector> {
    match Selector::parse(source) {
        Ok(selector) => Ok(CompiledSelector {
            source: source.to_string(),
            selector,
        }),
        Err(_) => Err(Error::InvalidSelector {
            selector: source.to_string(),
        }),
    }
}

impl CleaningProfile {
    /// A profile with no rules: cleaning with it is the identity.
    pub fn empty(language: &str) -> Self {
        CleaningProfile {
            language: language.to_string(),
            search: Vec::new(),
            remove: Vec::new(),
            replace: Vec::new(),
            enrichment_excluded_sections: None,
        }
    }

    /// Load and validate a profile from JSON text.
    pub fn from_json(source: &str) -> Result<Self> {
        let raw: RawProfile = serde_json::from_str(source)?;
        let search = raw
            .search
            .iter()
            .map(|s| compile(s))
            .collect::<Result<_>>()?;
        let remove = raw
            .remove
            .iter()
            .map(|s| compile(s))
            .collect::<Result<_>>()?;
        let replace = raw
            .replace
            .iter()
            .map(|r| {
                Ok(ReplaceRule {
                    selector: compile(&r.selector)?,
                    replacement: r.replacement.clone(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(CleaningProfile {
            language: raw.language.unwrap_or_else(|| "*".to_string()),
            search,
            remove,
            replace,
            enrichment_excluded_sections: raw.enrichment_excluded_sections,
        })
    }

    /// Merge the wildcard profile with a language profile: language entries
    /// are appended after wildcard entries, and the result carries the
    /// language profile's language code.
    pub fn merge(wildcard: &CleaningProfile, language: &CleaningProfile) -> Self {
        let mut merged = wildcard.clone();
        merged.language = language.language.clone();
        merged.search.extend(language.search.iter().cloned());
        merged.remove.extend(language.remove.iter().cloned());
        merged.replace.extend(language.replace.iter().cloned());
        merged.enrichment_excluded_sections = match (
            &wildcard.enrichment_excluded_sections,
            &language.enrichment_excluded_sections,
        ) {
            (None, None) => None,
            (Some(w), None) => Some(w.clone()),
            (None, Some(l)) => Some(l.clone()),
            (Some(w), Some(l)) => {
                let mut all = w.clone();
                all.extend(l.iter().cloned());
                Some(all)
            }
        };
        merged
    }

    /// The exclusion titles in effect: the configured list, or the defaults.
    pub fn effective_excluded_sections(&self) -> Vec<String> {
        match &self.enrichment_excluded_sections {
            Some(list) => list.clone(),
            None => DEFAULT_EXCLUDED_SECTIONS
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}
