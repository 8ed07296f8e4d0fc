//! Domain model for stand-off NIF documents.
//!
//! A [`NifDocument`] holds one article: the accumulated context string plus
//! offset-anchored sections, paragraphs, titles and link annotations. Every
//! node also carries the raw reference fields (subject URI, chain pointers,
//! referenceContext) exactly as they are serialized, so that a document read
//! back from a corpus file reproduces the file faithfully and the validator
//! can inspect the pointers as stored rather than as reconstructed.
//!
//! URI scheme (the corpus's public identifier contract, with
//! `base = http://nif.dbpedia.org/wiki/{lang}/{name}`):
//!
//! * context:   `{base}?dbpv={v}&nif=context`
//! * section:   `{base}?dbpv={v}&char={begin},{end}`
//! * link:      `{base}?dbpv={v}&char={begin},{end}`
//! * paragraph: `{base}?dbpv={v}&nif=paragraph&char={begin},{end}`
//! * title:     `{base}?dbpv={v}&nif=title&char={begin},{end}`
//!
//! Sections and links share the bare `char=` form, so a section whose span
//! coincides exactly with a link span (an article whose entire section is a
//! single link) mints one shared URI for both. Serialization emits both
//! nodes' triples under that subject and the parser recovers both via their
//! rdf:type triples, so such documents still round-trip.

use percent_encoding::{utf8_percent_encode, AsciiSet, CONTROLS};

use crate::error::{Error, Result};
use crate::text::Span;

/// Base namespace articles are minted under.
pub const WIKI_NS: &str = "http://nif.dbpedia.org/wiki/";

/// Characters of an article name that must be percent-encoded when it is
/// embedded in a URI path segment. `&` is included: every subject of a
/// document shares the prefix before the URI's first `&`, so a raw
/// ampersand in a name would corrupt that grouping key.
const ARTICLE_NAME_SET: &AsciiSet = &CONTROLS
    .add(b' ')
    .add(b'"')
    .add(b'#')
    .add(b'%')
    .add(b'&')
    .add(b'/')
    .add(b'<')
    .add(b'>')
    .add(b'?')
    .add(b'\\')
    .add(b'^')
    .add(b'`')
    .add(b'{')
    .add(b'|')
    .add(b'}')
    .add(b'[')
    .add(b']');

/// Identifying metadata for one extracted article.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArticleMeta {
    /// Article name in URI-path-safe form, spaces already folded to
    /// underscores (`United_States`). Non-ASCII is kept decoded; minting
    /// percent-encodes it.
    pub title: String,
    /// Wiki language code (`en`, `de`, ...).
    pub language: String,
    /// Corpus version tag (`2016-10`).
    pub corpus_version: String,
    /// Document the context was extracted from. When a revision is known it
    /// is carried here as the `oldid` query parameter.
    pub source_url: String,
    pub revision: Option<String>,
    /// ISO 639-3 language URI, e.g. `http://lexvo.org/id/iso639-3/eng`.
    pub predominant_language: String,
}

impl ArticleMeta {
    pub fn new(title: &str, language: &str, corpus_version: &str) -> Result<Self> {
        let title = title.trim().replace(' ', "_");
        if title.is_empty() {
            return Err(Error::InvalidMeta("title must be non-empty".into()));
        }
        if language.is_empty() {
            return Err(Error::InvalidMeta("language must be non-empty".into()));
        }
        if corpus_version.is_empty() {
            return Err(Error::InvalidMeta(
                "corpus version must be non-empty".into(),
            ));
        }
        let source_url = format!(
            "https://{}.wikipedia.org/wiki/{}",
            language,
            encode_article_name(&title)
        );
        Ok(ArticleMeta {
            title,
            language: language.to_string(),
            corpus_version: corpus_version.to_string(),
            source_url,
            revision: None,
            predominant_language: iso639_3_uri(language),
        })
    }

    /// Records the revision and rewrites `source_url` to the canonical
    /// `{base}?oldid={revision}` form so the value survives serialization.
    pub fn with_revision(mut self, revision: &str) -> Self {
        self.source_url = format!("{}?oldid={}", self.base_uri(), revision);
        self.revision = Some(revision.to_string());
        self
    }

    /// `http://nif.dbpedia.org/wiki/{lang}/{name}`.
    pub fn base_uri(&self) -> String {
        format!(
            "{}{}/{}",
            WIKI_NS,
            self.language,
            encode_article_name(&self.title)
        )
    }

    /// The document key all of this article's subjects share:
    /// `{base}?dbpv={version}`.
    pub fn document_key(&self) -> String {
        format!("{}?dbpv={}", self.base_uri(), self.corpus_version)
    }

    pub fn context_uri(&self) -> String {
        format!("{}&nif=context", self.document_key())
    }
}

/// Percent-encode an article name for use as a URI path segment.
pub fn encode_article_name(name: &str) -> String {
    utf8_percent_encode(name, ARTICLE_NAME_SET).to_string()
}

/// Map a wiki language code to its ISO 639-3 lexvo URI.
pub fn iso639_3_uri(language: &str) -> String {
    let code = match language {
        "en" => "eng",
        "de" => "deu",
        "fr" => "fra",
        "sv" => "swe",
        "nl" => "nld",
        "ru" => "rus",
        "it" => "ita",
        "es" => "spa",
        "pl" => "pol",
        "pt" => "por",
        "ja" => "jpn",
        "zh" => "zho",
        "ceb" => "ceb",
        other if other.len() == 3 => other,
        _ => "und",
    };
    format!("http://lexvo.org/id/iso639-3/{code}")
}

/// Annotation unit kinds addressable by [`mint_uri`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Context,
    Section(Span),
    Paragraph(Span),
    Title(Span),
    Link(Span),
}

/// Mint the canonical URI of one annotation unit. Deterministic and pure;
/// the output strings are the corpus's public identifier contract.
pub fn mint_uri(meta: &ArticleMeta, unit: Unit) -> Result<String> {
    if meta.language.is_empty() || meta.title.is_empty() {
        return Err(Error::InvalidMeta(
            "language and title must be non-empty".into(),
        ));
    }
    let key = meta.document_key();
    let check = |span: Span| -> Result<Span> {
        if span.begin > span.end {
            Err(Error::InvalidSpan {
                begin: span.begin,
                end: span.end,
            })
        } else {
            Ok(span)
        }
    };
    Ok(match unit {
        Unit::Context => format!("{key}&nif=context"),
        Unit::Section(s) | Unit::Link(s) => {
            let s = check(s)?;
            format!("{key}&char={},{}", s.begin, s.end)
        }
        Unit::Paragraph(s) => {
            let s = check(s)?;
            format!("{key}&nif=paragraph&char={},{}", s.begin, s.end)
        }
        Unit::Title(s) => {
            let s = check(s)?;
            format!("{key}&nif=title&char={},{}", s.begin, s.end)
        }
    })
}

/// Single-token vs multi-token link classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkKind {
    Word,
    Phrase,
}

/// Whether an annotation came from the source article or from enrichment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Original,
    Enriched,
}

/// Classify an anchor: `Word` iff it is a single whitespace-delimited token.
/// Hyphenated compounds count as one token.
pub fn classify_link(anchor: &str) -> Result<LinkKind> {
    let mut tokens = anchor.split_whitespace();
    match (tokens.next(), tokens.next()) {
        (None, _) => Err(Error::EmptyAnchor),
        (Some(_), None) => Ok(LinkKind::Word),
        (Some(_), Some(_)) => Ok(LinkKind::Phrase),
    }
}

/// A link annotation: a span of the context covered by an anchor, pointing
/// at a target resource.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub uri: String,
    pub span: Span,
    pub anchor: String,
    pub target: String,
    pub kind: LinkKind,
    pub provenance: Provenance,
    /// superString: URI of the containing paragraph.
    pub paragraph: String,
    /// referenceContext as stored.
    pub reference_context: String,
}

/// A section title span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Title {
    pub uri: String,
    pub span: Span,
    pub text: String,
    /// superString: URI of the titled section.
    pub section: String,
    pub reference_context: String,
}

/// A paragraph: a span of the context in document order within a section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paragraph {
    pub uri: String,
    pub span: Span,
    /// Links sorted by begin offset.
    pub links: Vec<Link>,
    /// nextParagraph pointer as stored.
    pub next: Option<String>,
    /// superString: URI of the containing section.
    pub section: String,
    pub reference_context: String,
}

/// A (sub-)section: optional title, paragraphs, nested subsections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub uri: String,
    pub span: Span,
    pub title: Option<Title>,
    pub paragraphs: Vec<Paragraph>,
    pub subsections: Vec<Section>,
    /// nextSection pointer as stored.
    pub next: Option<String>,
    /// firstParagraph/lastParagraph as stored.
    pub first_paragraph: Option<String>,
    pub last_paragraph: Option<String>,
    /// firstSection/lastSection over the subsections, as stored.
    pub first_subsection: Option<String>,
    pub last_subsection: Option<String>,
    pub reference_context: String,
}

/// One article: context string plus the annotation trees and chains.
#[derive(Debug, Clone, PartialEq)]
pub struct NifDocument {
    pub meta: ArticleMeta,
    /// Context URI as stored.
    pub uri: String,
    /// The accumulated article text (the nif:isString value).
    pub text: String,
    /// beginIndex/endIndex as stored. For a well-formed document
    /// `begin == 0` and `end` equals the code-point length of `text`.
    pub begin: usize,
    pub end: usize,
    /// Top-level sections in document order.
    pub sections: Vec<Section>,
    /// firstSection/lastSection as stored.
    pub first_section: Option<String>,
    pub last_section: Option<String>,
    /// Triples with predicates outside the emitted vocabulary, kept verbatim
    /// (one N-Triples line each) and re-emitted on serialization.
    pub unknown_triples: Vec<String>,
}

impl NifDocument {
    /// An empty document for `meta`: empty context, no sections.
    pub fn empty(meta: ArticleMeta) -> Self {
        let uri = meta.context_uri();
        NifDocument {
            meta,
            uri,
            text: String::new(),
            begin: 0,
            end: 0,
            sections: Vec::new(),
            first_section: None,
            last_section: None,
            unknown_triples: Vec::new(),
        }
    }

    /// All sections, depth-first in document order.
    pub fn walk_sections(&self) -> Vec<&Section> {
        fn walk<'a>(sections: &'a [Section], out: &mut Vec<&'a Section>) {
            for s in sections {
                out.push(s);
                walk(&s.subsections, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.sections, &mut out);
        out
    }

    /// All paragraphs, document order.
    pub fn walk_paragraphs(&self) -> Vec<&Paragraph> {
        self.walk_sections()
            .into_iter()
            .flat_map(|s| s.paragraphs.iter())
            .collect()
    }

    /// All links, document order.
    pub fn walk_links(&self) -> Vec<&Link> {
        self.walk_paragraphs()
            .into_iter()
            .flat_map(|p| p.links.iter())
            .collect()
    }

    pub fn link_count(&self) -> usize {
        self.walk_links().len()
    }

    pub fn paragraph_count(&self) -> usize {
        self.walk_paragraphs().len()
    }
}
