//! Syntactic validity battery: Unicode sanity, offset consistency and
//! structural integrity of parsed corpora.
//!
//! Rule identifiers are stable short codes:
//!
//! * `OFF-01` — stored text does not equal the context substring at the span
//! * `OFF-02` — span bounds broken (begin > end, end beyond the context,
//!   context indices wrong, or offsets disagreeing with the subject URI)
//! * `STR-01` — broken first/last/next chain or child listing
//! * `STR-02` — child span escaping its parent, or overlapping siblings
//! * `STR-03` — Word with a multi-token anchor or Phrase with a single token
//! * `STR-04` — referenceContext not pointing at the containing context
//! * `SYN-01` — N-Triples syntax or document assembly failure
//! * `UNI-01` — invalid byte sequences dropped from the input
//!
//! `check_offsets` reports at most one violation per span-bearing node, so
//! one injected corruption yields exactly one offset violation.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::error::Result;
use crate::model::{classify_link, NifDocument, Paragraph, Section};
use crate::rdf::{CorpusEvent, CorpusEvents};
use crate::text::{cp_len, OffsetMap, Span};

/// Stable rule identifiers for machine-consumable reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    Off01,
    Off02,
    Str01,
    Str02,
    Str03,
    Str04,
    Syn01,
    Uni01,
}

impl RuleId {
    pub fn code(&self) -> &'static str {
        match self {
            RuleId::Off01 => "OFF-01",
            RuleId::Off02 => "OFF-02",
            RuleId::Str01 => "STR-01",
            RuleId::Str02 => "STR-02",
            RuleId::Str03 => "STR-03",
            RuleId::Str04 => "STR-04",
            RuleId::Syn01 => "SYN-01",
            RuleId::Uni01 => "UNI-01",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// One rule violation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub rule: RuleId,
    pub subject: String,
    pub detail: String,
}

impl Violation {
    fn new(rule: RuleId, subject: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation {
            rule,
            subject: subject.into(),
            detail: detail.into(),
        }
    }

    /// One JSON object per violation, suitable for JSON-lines output.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "rule": self.rule.code(),
            "subject": self.subject,
            "detail": self.detail,
        })
        .to_string()
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.rule.code(), self.subject, self.detail)
    }
}

/// Aggregated validation outcome. The corpus passes iff `violations` is
/// empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub checked_triples: u64,
    pub violations: Vec<Violation>,
    pub dropped_codepoints: u64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Drop invalid byte sequences, returning clean text and the number of
/// dropped sequences. Valid input passes through unchanged with a zero
/// count; the function is total and idempotent.
pub fn sanitize_unicode(input: &[u8]) -> (String, u64) {
    let mut out = String::with_capacity(input.len());
    let mut dropped = 0u64;
    let mut rest = input;
    loop {
        match std::str::from_utf8(rest) {
            Ok(s) => {
                out.push_str(s);
                break;
            }
            Err(e) => {
                let valid = e.valid_up_to();
                out.push_str(std::str::from_utf8(&rest[..valid]).unwrap());
                dropped += 1;
                let skip = e.error_len().unwrap_or(rest.len() - valid);
                rest = &rest[valid + skip..];
            }
        }
    }
    (out, dropped)
}

/// The `char={begin},{end}` component of a minted URI, when present.
fn uri_span(uri: &str) -> Option<Span> {
    let at = uri.rfind("&char=")?;
    let coords = &uri[at + "&char=".len()..];
    let (b, e) = coords.split_once(',')?;
    Some(Span::new(b.parse().ok()?, e.parse().ok()?))
}

/// Offset consistency: every span must stay inside the context, agree with
/// its subject URI, and cover exactly its stored text. At most one
/// violation is emitted per node.
pub fn check_offsets(doc: &NifDocument) -> Vec<Violation> {
    let mut out = Vec::new();
    let map = OffsetMap::new(&doc.text);
    let len = map.cp_len();

    if doc.begin != 0 {
        out.push(Violation::new(
            RuleId::Off02,
            &doc.uri,
            format!("context beginIndex is {}, expected 0", doc.begin),
        ));
    } else if doc.end != len {
        out.push(Violation::new(
            RuleId::Off02,
            &doc.uri,
            format!(
                "context endIndex is {}, but the text has {} code points",
                doc.end, len
            ),
        ));
    }

    let mut check_span = |uri: &str, span: Span, text: Option<&str>, what: &str| {
        if span.begin > span.end {
            out.push(Violation::new(
                RuleId::Off02,
                uri,
                format!("{what} span {span} is inverted"),
            ));
            return;
        }
        if span.end > len {
            out.push(Violation::new(
                RuleId::Off02,
                uri,
                format!("{what} span {span} ends past the context length {len}"),
            ));
            return;
        }
        if let Some(minted) = uri_span(uri) {
            if minted != span {
                out.push(Violation::new(
                    RuleId::Off02,
                    uri,
                    format!("{what} offsets {span} disagree with the subject URI"),
                ));
                return;
            }
        }
        if let Some(expected) = text {
            let actual = map.slice(&doc.text, span).unwrap_or_default();
            if actual != expected {
                out.push(Violation::new(
                    RuleId::Off01,
                    uri,
                    format!("{what} text {expected:?} differs from context slice {actual:?}"),
                ));
            }
        }
    };

    for section in doc.walk_sections() {
        check_span(&section.uri, section.span, None, "section");
        if let Some(title) = &section.title {
            check_span(&title.uri, title.span, Some(&title.text), "title");
        }
        for p in &section.paragraphs {
            check_span(&p.uri, p.span, None, "paragraph");
            for link in &p.links {
                check_span(&link.uri, link.span, Some(&link.anchor), "anchorOf");
            }
        }
    }
    out
}

/// Structural integrity: chains, containment, sibling overlap, word/phrase
/// classes and referenceContext edges.
pub fn check_structure(doc: &NifDocument) -> Vec<Violation> {
    let mut out = Vec::new();
    let context_span = Span::new(0, cp_len(&doc.text));

    check_sibling_sections(&doc.sections, &doc.uri, context_span, "context", &mut out);
    check_first_last(
        &doc.uri,
        "firstSection",
        &doc.first_section,
        doc.sections.first().map(|s| s.uri.as_str()),
        &mut out,
    );
    check_first_last(
        &doc.uri,
        "lastSection",
        &doc.last_section,
        doc.sections.last().map(|s| s.uri.as_str()),
        &mut out,
    );

    for section in doc.walk_sections() {
        check_section(section, doc, &mut out);
    }
    out
}

fn check_first_last(
    subject: &str,
    what: &str,
    stored: &Option<String>,
    actual: Option<&str>,
    out: &mut Vec<Violation>,
) {
    if stored.as_deref() != actual {
        out.push(Violation::new(
            RuleId::Str01,
            subject,
            format!(
                "{what} is {:?}, expected {:?}",
                stored.as_deref().unwrap_or("absent"),
                actual.unwrap_or("absent")
            ),
        ));
    }
}

fn check_sibling_sections(
    sections: &[Section],
    parent_uri: &str,
    parent_span: Span,
    parent_kind: &str,
    out: &mut Vec<Violation>,
) {
    for (i, s) in sections.iter().enumerate() {
        // Chain pointer must name the next sibling (or nothing, at the end).
        let expected_next = sections.get(i + 1).map(|n| n.uri.as_str());
        if s.next.as_deref() != expected_next {
            out.push(Violation::new(
                RuleId::Str01,
                &s.uri,
                format!(
                    "nextSection is {:?}, expected {:?}",
                    s.next.as_deref().unwrap_or("absent"),
                    expected_next.unwrap_or("absent")
                ),
            ));
        }
        if !parent_span.contains(&s.span) {
            out.push(Violation::new(
                RuleId::Str02,
                &s.uri,
                format!(
                    "section span {} escapes its {parent_kind} {parent_uri}",
                    s.span
                ),
            ));
        }
        if i > 0 && sections[i - 1].span.overlaps(&s.span) {
            out.push(Violation::new(
                RuleId::Str02,
                &s.uri,
                format!("section span {} overlaps its preceding sibling", s.span),
            ));
        }
    }
}

fn check_section(section: &Section, doc: &NifDocument, out: &mut Vec<Violation>) {
    if section.reference_context != doc.uri {
        out.push(Violation::new(
            RuleId::Str04,
            &section.uri,
            format!("referenceContext is {:?}", section.reference_context),
        ));
    }
    if let Some(title) = &section.title {
        if !section.span.contains(&title.span) {
            out.push(Violation::new(
                RuleId::Str02,
                &title.uri,
                format!("title span {} escapes section {}", title.span, section.uri),
            ));
        }
        if title.reference_context != doc.uri {
            out.push(Violation::new(
                RuleId::Str04,
                &title.uri,
                format!("referenceContext is {:?}", title.reference_context),
            ));
        }
        if title.section != section.uri {
            out.push(Violation::new(
                RuleId::Str01,
                &title.uri,
                format!(
                    "title superString is {:?}, expected {}",
                    title.section, section.uri
                ),
            ));
        }
    }

    check_first_last(
        &section.uri,
        "firstParagraph",
        &section.first_paragraph,
        section.paragraphs.first().map(|p| p.uri.as_str()),
        out,
    );
    check_first_last(
        &section.uri,
        "lastParagraph",
        &section.last_paragraph,
        section.paragraphs.last().map(|p| p.uri.as_str()),
        out,
    );
    check_first_last(
        &section.uri,
        "firstSection",
        &section.first_subsection,
        section.subsections.first().map(|s| s.uri.as_str()),
        out,
    );
    check_first_last(
        &section.uri,
        "lastSection",
        &section.last_subsection,
        section.subsections.last().map(|s| s.uri.as_str()),
        out,
    );

    for (i, p) in section.paragraphs.iter().enumerate() {
        let expected_next = section.paragraphs.get(i + 1).map(|n| n.uri.as_str());
        if p.next.as_deref() != expected_next {
            out.push(Violation::new(
                RuleId::Str01,
                &p.uri,
                format!(
                    "nextParagraph is {:?}, expected {:?}",
                    p.next.as_deref().unwrap_or("absent"),
                    expected_next.unwrap_or("absent")
                ),
            ));
        }
        if p.section != section.uri {
            out.push(Violation::new(
                RuleId::Str01,
                &p.uri,
                format!("superString is {:?}, expected {}", p.section, section.uri),
            ));
        }
        if !section.span.contains(&p.span) {
            out.push(Violation::new(
                RuleId::Str02,
                &p.uri,
                format!("paragraph span {} escapes section {}", p.span, section.uri),
            ));
        }
        if i > 0 && section.paragraphs[i - 1].span.overlaps(&p.span) {
            out.push(Violation::new(
                RuleId::Str02,
                &p.uri,
                format!("paragraph span {} overlaps its preceding sibling", p.span),
            ));
        }
        if p.reference_context != doc.uri {
            out.push(Violation::new(
                RuleId::Str04,
                &p.uri,
                format!("referenceContext is {:?}", p.reference_context),
            ));
        }
        check_links(p, doc, out);
    }

    check_sibling_sections(
        &section.subsections,
        &section.uri,
        section.span,
        "section",
        out,
    );
}

fn check_links(p: &Paragraph, doc: &NifDocument, out: &mut Vec<Violation>) {
    for (i, link) in p.links.iter().enumerate() {
        if !p.span.contains(&link.span) {
            out.push(Violation::new(
                RuleId::Str02,
                &link.uri,
                format!("link span {} escapes paragraph {}", link.span, p.uri),
            ));
        }
        if i > 0 && p.links[i - 1].span.overlaps(&link.span) {
            out.push(Violation::new(
                RuleId::Str02,
                &link.uri,
                format!("link span {} overlaps its preceding sibling", link.span),
            ));
        }
        if link.paragraph != p.uri {
            out.push(Violation::new(
                RuleId::Str01,
                &link.uri,
                format!("superString is {:?}, expected {}", link.paragraph, p.uri),
            ));
        }
        if link.reference_context != doc.uri {
            out.push(Violation::new(
                RuleId::Str04,
                &link.uri,
                format!("referenceContext is {:?}", link.reference_context),
            ));
        }
        match classify_link(&link.anchor) {
            Ok(expected) if expected != link.kind => {
                out.push(Violation::new(
                    RuleId::Str03,
                    &link.uri,
                    format!(
                        "typed {:?} but the anchor {:?} is {:?}",
                        link.kind, link.anchor, expected
                    ),
                ));
            }
            Err(_) => {
                out.push(Violation::new(
                    RuleId::Str03,
                    &link.uri,
                    "empty anchor text",
                ));
            }
            Ok(_) => {}
        }
    }
}

/// Run both per-document check batteries.
pub fn check_document(doc: &NifDocument) -> Vec<Violation> {
    let mut out = check_offsets(doc);
    out.extend(check_structure(doc));
    out
}

/// Validate an N-Triples corpus file: Unicode sanitation accounting, lenient
/// parsing (syntax errors become violations, processing continues), then the
/// offset and structure batteries per document. Violations are sorted, so
/// aggregation is order-independent.
pub fn validate_corpus(path: &Path) -> Result<ValidationReport> {
    let mut file = File::open(path)?;
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes)?;
    let origin = path.display().to_string();
    validate_bytes(&bytes, &origin)
}

/// As [`validate_corpus`], over in-memory bytes.
pub fn validate_bytes(bytes: &[u8], origin: &str) -> Result<ValidationReport> {
    let (text, dropped) = sanitize_unicode(bytes);
    let mut report = ValidationReport {
        dropped_codepoints: dropped,
        ..Default::default()
    };
    if dropped > 0 {
        report.violations.push(Violation::new(
            RuleId::Uni01,
            origin,
            format!("{dropped} invalid byte sequence(s) dropped"),
        ));
    }
    validate_reader(BufReader::new(text.as_bytes()), &mut report)?;
    report.violations.sort();
    Ok(report)
}

fn validate_reader<R: BufRead>(reader: R, report: &mut ValidationReport) -> Result<()> {
    for event in CorpusEvents::new(reader) {
        match event {
            CorpusEvent::Document { doc, triples } => {
                report.checked_triples += triples;
                report.violations.extend(check_document(&doc));
            }
            CorpusEvent::DocumentError {
                key,
                error,
                triples,
            } => {
                report.checked_triples += triples;
                report
                    .violations
                    .push(Violation::new(RuleId::Syn01, key, error.to_string()));
            }
            CorpusEvent::SyntaxError { error } => {
                report
                    .violations
                    .push(Violation::new(RuleId::Syn01, "", error.to_string()));
            }
            CorpusEvent::Io { error } => return Err(error),
        }
    }
    Ok(())
}
