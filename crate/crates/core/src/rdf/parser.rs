//! N-Triples parsing and document reassembly.
//!
//! The parser accepts the line-oriented N-Triples grammar restricted to the
//! vocabulary emitted by the writer; triples with other predicates are kept
//! verbatim in the document's side list and re-emitted on round-trip. Turtle
//! is write-only.
//!
//! All subjects of one document share the key `{base}?dbpv={v}` (everything
//! before the first `&`). [`parse`] groups triples by that key over the
//! whole stream; [`CorpusEvents`] streams document-by-document with
//! per-context memory only, assuming documents are contiguous in the file,
//! which holds for every corpus this tool writes.

use std::collections::HashMap;
use std::io::BufRead;

use percent_encoding::percent_decode_str;

use crate::error::{Error, Result};
use crate::model::{
    ArticleMeta, Link, LinkKind, NifDocument, Paragraph, Provenance, Section, Title, WIKI_NS,
};
use crate::rdf::triple::{unescape_literal, Object, Triple};
use crate::rdf::vocab::*;
use crate::text::Span;

/// A parsed triple plus its provenance in the source stream.
#[derive(Debug, Clone)]
pub struct ParsedTriple {
    pub triple: Triple,
    pub line_no: usize,
    pub raw: String,
}

/// The grouping key shared by all subjects of one document: the subject URI
/// up to (excluding) its first `&`.
pub fn document_key(subject: &str) -> &str {
    match subject.find('&') {
        Some(i) => &subject[..i],
        None => subject,
    }
}

/// Parse one N-Triples line. Blank lines and comment lines yield `None`.
pub fn parse_line(line: &str, line_no: usize) -> Result<Option<ParsedTriple>> {
    let raw = line.trim_end_matches(['\n', '\r']).to_string();
    let s = line.trim();
    if s.is_empty() || s.starts_with('#') {
        return Ok(None);
    }
    let err = |detail: &str| Error::Syntax {
        line: line_no,
        detail: detail.to_string(),
    };

    let mut rest = s;
    let subject = take_iri(&mut rest).ok_or_else(|| err("expected <subject>"))?;
    skip_ws(&mut rest);
    let predicate = take_iri(&mut rest).ok_or_else(|| err("expected <predicate>"))?;
    skip_ws(&mut rest);
    let object = if rest.starts_with('<') {
        Object::Iri(take_iri(&mut rest).ok_or_else(|| err("unterminated object IRI"))?)
    } else if rest.starts_with('"') {
        let lexical = take_quoted(&mut rest).ok_or_else(|| err("unterminated literal"))?;
        let lexical = unescape_literal(&lexical).map_err(|e| err(&e))?;
        if let Some(stripped) = rest.strip_prefix("^^") {
            rest = stripped;
            let dt = take_iri(&mut rest).ok_or_else(|| err("expected datatype IRI after ^^"))?;
            Object::Literal {
                lexical,
                datatype: Some(dt),
                lang: None,
            }
        } else if let Some(stripped) = rest.strip_prefix('@') {
            rest = stripped;
            let end = rest
                .find(|c: char| c.is_whitespace() || c == '.')
                .unwrap_or(rest.len());
            let lang = rest[..end].to_string();
            if lang.is_empty() {
                return Err(err("empty language tag"));
            }
            rest = &rest[end..];
            Object::Literal {
                lexical,
                datatype: None,
                lang: Some(lang),
            }
        } else {
            Object::Literal {
                lexical,
                datatype: None,
                lang: None,
            }
        }
    } else {
        return Err(err("expected object IRI or literal"));
    };
    skip_ws(&mut rest);
    if !rest.starts_with('.') {
        return Err(err("expected terminating '.'"));
    }
    if !rest[1..].trim().is_empty() {
        return Err(err("trailing content after '.'"));
    }
    Ok(Some(ParsedTriple {
        triple: Triple {
            subject,
            predicate,
            object,
        },
        line_no,
        raw,
    }))
}

fn skip_ws(rest: &mut &str) {
    *rest = rest.trim_start();
}

fn take_iri(rest: &mut &str) -> Option<String> {
    let s = rest.strip_prefix('<')?;
    let end = s.find('>')?;
    let iri = s[..end].to_string();
    *rest = &s[end + 1..];
    Some(iri)
}

/// Take the escaped body of a double-quoted literal, leaving `rest` after
/// the closing quote. The body is returned still escaped.
fn take_quoted(rest: &mut &str) -> Option<String> {
    let s = rest.strip_prefix('"')?;
    let mut escaped = false;
    for (i, ch) in s.char_indices() {
        if escaped {
            escaped = false;
            continue;
        }
        match ch {
            '\\' => escaped = true,
            '"' => {
                let body = s[..i].to_string();
                *rest = &s[i + 1..];
                return Some(body);
            }
            _ => {}
        }
    }
    None
}

/// Parse a whole N-Triples stream into documents grouped by context. Strict:
/// the first syntax or assembly error aborts.
pub fn parse<R: BufRead>(reader: R) -> Result<Vec<NifDocument>> {
    let mut order: Vec<String> = Vec::new();
    let mut buckets: HashMap<String, Vec<ParsedTriple>> = HashMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if let Some(t) = parse_line(&line, i + 1)? {
            let key = document_key(&t.triple.subject).to_string();
            if !buckets.contains_key(&key) {
                order.push(key.clone());
            }
            buckets.entry(key).or_default().push(t);
        }
    }
    order
        .into_iter()
        .map(|key| assemble_document(&key, buckets.remove(&key).unwrap()))
        .collect()
}

/// Streaming per-document reader. Yields one event per document (or per
/// unparseable line); documents must be contiguous in the stream.
pub struct CorpusEvents<R: BufRead> {
    lines: std::iter::Enumerate<std::io::Lines<R>>,
    current_key: Option<String>,
    pending: Vec<ParsedTriple>,
    done: bool,
}

/// One outcome while streaming a corpus.
pub enum CorpusEvent {
    /// A document chunk assembled successfully.
    Document { doc: Box<NifDocument>, triples: u64 },
    /// A document chunk failed to assemble.
    DocumentError {
        key: String,
        error: Error,
        triples: u64,
    },
    /// One line failed to parse; reading continues at the next line.
    SyntaxError { error: Error },
    /// An I/O failure; iteration stops after this event.
    Io { error: Error },
}

impl<R: BufRead> CorpusEvents<R> {
    pub fn new(reader: R) -> Self {
        CorpusEvents {
            lines: reader.lines().enumerate(),
            current_key: None,
            pending: Vec::new(),
            done: false,
        }
    }

    fn flush(&mut self) -> Option<CorpusEvent> {
        let key = self.current_key.take()?;
        let triples = self.pending.len() as u64;
        let chunk = std::mem::take(&mut self.pending);
        Some(match assemble_document(&key, chunk) {
            Ok(doc) => CorpusEvent::Document {
                doc: Box::new(doc),
                triples,
            },
            Err(error) => CorpusEvent::DocumentError {
                key,
                error,
                triples,
            },
        })
    }
}

impl<R: BufRead> Iterator for CorpusEvents<R> {
    type Item = CorpusEvent;

    fn next(&mut self) -> Option<CorpusEvent> {
        if self.done {
            return None;
        }
        loop {
            match self.lines.next() {
                None => {
                    self.done = true;
                    return self.flush();
                }
                Some((i, Err(e))) => {
                    self.done = true;
                    let _ = i;
                    return Some(CorpusEvent::Io { error: e.into() });
                }
                Some((i, Ok(line))) => match parse_line(&line, i + 1) {
                    Err(error) => return Some(CorpusEvent::SyntaxError { error }),
                    Ok(None) => continue,
                    Ok(Some(t)) => {
                        let key = document_key(&t.triple.subject).to_string();
                        match &self.current_key {
                            Some(current) if *current == key => {
                                self.pending.push(t);
                            }
                            Some(_) => {
                                let event = self.flush();
                                self.current_key = Some(key);
                                self.pending.push(t);
                                return event;
                            }
                            None => {
                                self.current_key = Some(key);
                                self.pending.push(t);
                            }
                        }
                    }
                },
            }
        }
    }
}

/// Rebuild one document from the triples sharing its key.
pub fn assemble_document(key: &str, triples: Vec<ParsedTriple>) -> Result<NifDocument> {
    // Subject blocks in file order.
    let mut subjects: Vec<String> = Vec::new();
    let mut blocks: HashMap<String, Vec<ParsedTriple>> = HashMap::new();
    for t in triples {
        let s = t.triple.subject.clone();
        if !blocks.contains_key(&s) {
            subjects.push(s.clone());
        }
        blocks.entry(s).or_default().push(t);
    }

    let type_of = |block: &[ParsedTriple]| -> Option<String> {
        block
            .iter()
            .find(|t| t.triple.predicate == RDF_TYPE)
            .and_then(|t| t.triple.object.as_iri().map(|s| s.to_string()))
    };

    let context_subject = subjects
        .iter()
        .find(|s| type_of(&blocks[*s]).as_deref() == Some(NIF_CONTEXT))
        .cloned()
        .ok_or_else(|| Error::MissingContext {
            uri: key.to_string(),
        })?;

    let mut unknown: Vec<String> = Vec::new();

    // Context fields.
    let ctx_block = blocks.remove(&context_subject).unwrap();
    let mut ctx = FieldReader::new(&context_subject, ctx_block);
    ctx.take_type();
    let begin = ctx.take_index(NIF_BEGIN_INDEX)?;
    let end = ctx.take_index(NIF_END_INDEX)?;
    let text = ctx.take_literal(NIF_IS_STRING)?.unwrap_or_default();
    let source_url = ctx.take_iri_value(NIF_SOURCE_URL);
    let pred_lang = ctx.take_iri_value(NIF_PRED_LANG);
    let first_section = ctx.take_iri_value(NIF_FIRST_SECTION);
    let last_section = ctx.take_iri_value(NIF_LAST_SECTION);
    let section_uris = ctx.take_iri_list(NIF_HAS_SECTION);
    ctx.drain_unknown(&mut unknown);

    let mut meta = meta_from_context_uri(&context_subject)?;
    if let Some(url) = source_url {
        meta.revision = revision_from_url(&url);
        meta.source_url = url;
    }
    if let Some(lang_uri) = pred_lang {
        meta.predominant_language = lang_uri;
    }

    // Node records by subject.
    struct SectionRec {
        uri: String,
        span: Span,
        reference_context: String,
        first_subsection: Option<String>,
        last_subsection: Option<String>,
        subsection_uris: Vec<String>,
        first_paragraph: Option<String>,
        last_paragraph: Option<String>,
        paragraph_uris: Vec<String>,
        next: Option<String>,
    }
    let mut sections: HashMap<String, SectionRec> = HashMap::new();
    let mut paragraphs: HashMap<String, Paragraph> = HashMap::new();
    let mut titles: Vec<Title> = Vec::new();
    let mut links: Vec<Link> = Vec::new();

    for subject in &subjects {
        let block = match blocks.remove(subject) {
            Some(b) => b,
            None => continue, // context, already consumed
        };
        // A subject may carry several rdf:type triples: the bare char= URI
        // scheme makes a section and a link with identical spans share one
        // subject. Each known class consumes its own copies of the shared
        // predicates in file order, so both nodes are recovered.
        let types: Vec<String> = block
            .iter()
            .filter(|t| t.triple.predicate == RDF_TYPE)
            .filter_map(|t| t.triple.object.as_iri().map(|s| s.to_string()))
            .collect();
        let mut fields = FieldReader::new(subject, block);
        for ty in &types {
            match ty.as_str() {
                NIF_SECTION => {
                    fields.take_type_value(NIF_SECTION);
                    let span = Span::new(
                        fields.take_index(NIF_BEGIN_INDEX)?,
                        fields.take_index(NIF_END_INDEX)?,
                    );
                    sections.insert(
                        subject.clone(),
                        SectionRec {
                            uri: subject.clone(),
                            span,
                            reference_context: fields
                                .take_iri_value(NIF_REFERENCE_CONTEXT)
                                .unwrap_or_default(),
                            first_subsection: fields.take_iri_value(NIF_FIRST_SECTION),
                            last_subsection: fields.take_iri_value(NIF_LAST_SECTION),
                            subsection_uris: fields.take_iri_list(NIF_HAS_SECTION),
                            first_paragraph: fields.take_iri_value(NIF_FIRST_PARAGRAPH),
                            last_paragraph: fields.take_iri_value(NIF_LAST_PARAGRAPH),
                            paragraph_uris: fields.take_iri_list(NIF_HAS_PARAGRAPH),
                            next: fields.take_iri_value(NIF_NEXT_SECTION),
                        },
                    );
                }
                NIF_PARAGRAPH => {
                    fields.take_type_value(NIF_PARAGRAPH);
                    let span = Span::new(
                        fields.take_index(NIF_BEGIN_INDEX)?,
                        fields.take_index(NIF_END_INDEX)?,
                    );
                    paragraphs.insert(
                        subject.clone(),
                        Paragraph {
                            uri: subject.clone(),
                            span,
                            links: Vec::new(),
                            next: fields.take_iri_value(NIF_NEXT_PARAGRAPH),
                            section: fields.take_iri_value(NIF_SUPER_STRING).unwrap_or_default(),
                            reference_context: fields
                                .take_iri_value(NIF_REFERENCE_CONTEXT)
                                .unwrap_or_default(),
                        },
                    );
                }
                NIF_TITLE => {
                    fields.take_type_value(NIF_TITLE);
                    let span = Span::new(
                        fields.take_index(NIF_BEGIN_INDEX)?,
                        fields.take_index(NIF_END_INDEX)?,
                    );
                    titles.push(Title {
                        uri: subject.clone(),
                        span,
                        text: fields.take_literal(NIF_ANCHOR_OF)?.unwrap_or_default(),
                        section: fields.take_iri_value(NIF_SUPER_STRING).unwrap_or_default(),
                        reference_context: fields
                            .take_iri_value(NIF_REFERENCE_CONTEXT)
                            .unwrap_or_default(),
                    });
                }
                NIF_WORD | NIF_PHRASE => {
                    let kind = if ty == NIF_WORD {
                        LinkKind::Word
                    } else {
                        LinkKind::Phrase
                    };
                    fields.take_type_value(ty);
                    let span = Span::new(
                        fields.take_index(NIF_BEGIN_INDEX)?,
                        fields.take_index(NIF_END_INDEX)?,
                    );
                    let enriched = fields
                        .take_literal(NFF_ENRICHED)?
                        .is_some_and(|v| v == "true");
                    links.push(Link {
                        uri: subject.clone(),
                        span,
                        anchor: fields.take_literal(NIF_ANCHOR_OF)?.unwrap_or_default(),
                        target: fields
                            .take_iri_value(ITSRDF_TA_IDENT_REF)
                            .unwrap_or_default(),
                        kind,
                        provenance: if enriched {
                            Provenance::Enriched
                        } else {
                            Provenance::Original
                        },
                        paragraph: fields.take_iri_value(NIF_SUPER_STRING).unwrap_or_default(),
                        reference_context: fields
                            .take_iri_value(NIF_REFERENCE_CONTEXT)
                            .unwrap_or_default(),
                    });
                }
                _ => {} // unknown class: its triples stay verbatim
            }
        }
        fields.drain_unknown(&mut unknown);
    }

    // Attach links to paragraphs via superString, sorted by span.
    links.sort_by_key(|l| (l.span.begin, l.span.end, l.uri.clone()));
    for link in links {
        match paragraphs.get_mut(&link.paragraph) {
            Some(p) => p.links.push(link),
            None => {
                return Err(Error::Syntax {
                    line: 0,
                    detail: format!(
                        "link {} references missing paragraph {}",
                        link.uri, link.paragraph
                    ),
                })
            }
        }
    }

    // Build the section tree bottom-up following hasSection/hasParagraph.
    fn build_section(
        uri: &str,
        sections: &mut HashMap<String, SectionRecLocal>,
        paragraphs: &mut HashMap<String, Paragraph>,
        titles: &mut Vec<Title>,
    ) -> Result<Section> {
        let rec = sections.remove(uri).ok_or_else(|| Error::Syntax {
            line: 0,
            detail: format!("referenced section {uri} not found"),
        })?;
        let mut paras = Vec::with_capacity(rec.paragraph_uris.len());
        for p_uri in &rec.paragraph_uris {
            let p = paragraphs.remove(p_uri).ok_or_else(|| Error::Syntax {
                line: 0,
                detail: format!("section {uri} references missing paragraph {p_uri}"),
            })?;
            paras.push(p);
        }
        let mut subs = Vec::with_capacity(rec.subsection_uris.len());
        for s_uri in &rec.subsection_uris {
            subs.push(build_section(s_uri, sections, paragraphs, titles)?);
        }
        let title_pos = titles.iter().position(|t| t.section == *uri);
        let title = title_pos.map(|i| titles.remove(i));
        Ok(Section {
            uri: rec.uri,
            span: rec.span,
            title,
            paragraphs: paras,
            subsections: subs,
            next: rec.next,
            first_paragraph: rec.first_paragraph,
            last_paragraph: rec.last_paragraph,
            first_subsection: rec.first_subsection,
            last_subsection: rec.last_subsection,
            reference_context: rec.reference_context,
        })
    }
    // Local alias so the nested fn signature stays readable.
    type SectionRecLocal = SectionRec;

    let mut top_sections = Vec::with_capacity(section_uris.len());
    for s_uri in &section_uris {
        top_sections.push(build_section(
            s_uri,
            &mut sections,
            &mut paragraphs,
            &mut titles,
        )?);
    }

    // Anything left over was never referenced.
    if let Some((uri, _)) = sections.iter().next() {
        return Err(Error::Syntax {
            line: 0,
            detail: format!("section {uri} is not reachable from the context"),
        });
    }
    if let Some((uri, _)) = paragraphs.iter().next() {
        return Err(Error::Syntax {
            line: 0,
            detail: format!("paragraph {uri} is not reachable from any section"),
        });
    }
    if let Some(t) = titles.first() {
        return Err(Error::Syntax {
            line: 0,
            detail: format!("title {} references missing section {}", t.uri, t.section),
        });
    }

    unknown.sort_unstable();
    Ok(NifDocument {
        meta,
        uri: context_subject,
        text,
        begin,
        end,
        sections: top_sections,
        first_section,
        last_section,
        unknown_triples: unknown,
    })
}

/// Recover article metadata from a context URI minted by this tool.
fn meta_from_context_uri(uri: &str) -> Result<ArticleMeta> {
    let bad = || Error::Syntax {
        line: 0,
        detail: format!("context URI {uri} does not match the minting scheme"),
    };
    let rest = uri.strip_prefix(WIKI_NS).ok_or_else(bad)?;
    let slash = rest.find('/').ok_or_else(bad)?;
    let language = &rest[..slash];
    let rest = &rest[slash + 1..];
    let q = rest.find('?').ok_or_else(bad)?;
    let name = &rest[..q];
    let query = &rest[q + 1..];
    let version = query
        .strip_prefix("dbpv=")
        .and_then(|v| v.split('&').next())
        .ok_or_else(bad)?;
    let title = percent_decode_str(name)
        .decode_utf8()
        .map_err(|_| bad())?
        .into_owned();
    if title.is_empty() || language.is_empty() || version.is_empty() {
        return Err(bad());
    }
    ArticleMeta::new(&title, language, version).map_err(|_| bad())
}

fn revision_from_url(url: &str) -> Option<String> {
    let q = url.find("?oldid=")?;
    let rev = &url[q + "?oldid=".len()..];
    let rev = rev.split('&').next().unwrap_or(rev);
    (!rev.is_empty()).then(|| rev.to_string())
}

/// Pulls known fields out of a subject block, leaving the remainder for the
/// verbatim side list.
struct FieldReader {
    subject: String,
    triples: Vec<Option<ParsedTriple>>,
}

impl FieldReader {
    fn new(subject: &str, block: Vec<ParsedTriple>) -> Self {
        FieldReader {
            subject: subject.to_string(),
            triples: block.into_iter().map(Some).collect(),
        }
    }

    fn take(&mut self, predicate: &str) -> Option<ParsedTriple> {
        for slot in &mut self.triples {
            if slot
                .as_ref()
                .is_some_and(|t| t.triple.predicate == predicate)
            {
                return slot.take();
            }
        }
        None
    }

    fn take_type(&mut self) {
        let _ = self.take(RDF_TYPE);
    }

    /// Consume the rdf:type triple with this exact class object.
    fn take_type_value(&mut self, class: &str) {
        for slot in &mut self.triples {
            let matches = slot.as_ref().is_some_and(|t| {
                t.triple.predicate == RDF_TYPE && t.triple.object.as_iri() == Some(class)
            });
            if matches {
                slot.take();
                return;
            }
        }
    }

    fn take_index(&mut self, predicate: &str) -> Result<usize> {
        let t = self.take(predicate).ok_or_else(|| Error::Syntax {
            line: 0,
            detail: format!("{} is missing {}", self.subject, predicate),
        })?;
        let lexical = t.triple.object.as_lexical().ok_or_else(|| Error::Syntax {
            line: t.line_no,
            detail: format!("{predicate} must be a literal"),
        })?;
        lexical.parse::<usize>().map_err(|_| Error::InvalidOffset {
            line: t.line_no,
            detail: format!("{lexical:?}"),
        })
    }

    fn take_literal(&mut self, predicate: &str) -> Result<Option<String>> {
        match self.take(predicate) {
            None => Ok(None),
            Some(t) => match t.triple.object {
                Object::Literal { lexical, .. } => Ok(Some(lexical)),
                Object::Iri(_) => Err(Error::Syntax {
                    line: t.line_no,
                    detail: format!("{predicate} must be a literal"),
                }),
            },
        }
    }

    fn take_iri_value(&mut self, predicate: &str) -> Option<String> {
        self.take(predicate)
            .and_then(|t| t.triple.object.as_iri().map(|s| s.to_string()))
    }

    fn take_iri_list(&mut self, predicate: &str) -> Vec<String> {
        let mut out = Vec::new();
        while let Some(t) = self.take(predicate) {
            if let Some(iri) = t.triple.object.as_iri() {
                out.push(iri.to_string());
            }
        }
        out
    }

    fn drain_unknown(&mut self, unknown: &mut Vec<String>) {
        for slot in &mut self.triples {
            if let Some(t) = slot.take() {
                unknown.push(t.raw);
            }
        }
    }
}
