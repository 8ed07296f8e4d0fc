//! Deterministic N-Triples and Turtle serialization.
//!
//! Every document serializes to the same bytes on every run: subjects are
//! sorted lexicographically and predicates follow the fixed order below.
//! Unknown triples carried through from parsing are re-emitted verbatim,
//! sorted, after the document's own triples.
//!
//! Predicate order within a subject:
//! rdf:type, nif:beginIndex, nif:endIndex, nif:isString, nif:anchorOf,
//! nif:referenceContext, nif:sourceUrl, nif:predLang, nif:firstSection,
//! nif:lastSection, nif:hasSection (document order), nif:firstParagraph,
//! nif:lastParagraph, nif:hasParagraph (document order), nif:nextSection,
//! nif:nextParagraph, nif:superString, itsrdf:taIdentRef, nff:enriched.

use std::io::Write;

use crate::error::Result;
use crate::model::{LinkKind, NifDocument, Paragraph, Provenance, Section, Title, WIKI_NS};
use crate::rdf::triple::{escape_literal, Object, Triple};
use crate::rdf::vocab::*;

/// Output serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdfFormat {
    NTriples,
    Turtle,
}

impl RdfFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            RdfFormat::NTriples => "nt",
            RdfFormat::Turtle => "ttl",
        }
    }
}

impl std::str::FromStr for RdfFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "nt" => Ok(RdfFormat::NTriples),
            "ttl" => Ok(RdfFormat::Turtle),
            other => Err(format!("unknown format {other:?}, expected nt or ttl")),
        }
    }
}

/// Serialization switches.
#[derive(Debug, Clone, Copy, Default)]
pub struct SerializeOptions {
    /// Emit one `nff:enriched "true"^^xsd:boolean` triple per enriched link.
    pub mark_enriched: bool,
}

/// Serialize one document; returns the number of triples written (verbatim
/// unknown lines included). Turtle output of the same document denotes the
/// same triple set as the N-Triples output.
pub fn serialize<W: Write>(
    doc: &NifDocument,
    format: RdfFormat,
    sink: &mut W,
    opts: SerializeOptions,
) -> Result<u64> {
    let blocks = build_blocks(doc, opts);
    let count =
        blocks.iter().map(|b| b.1.len() as u64).sum::<u64>() + doc.unknown_triples.len() as u64;
    match format {
        RdfFormat::NTriples => {
            for (_, triples) in &blocks {
                for t in triples {
                    writeln!(sink, "{t}")?;
                }
            }
            for raw in sorted_unknown(doc) {
                writeln!(sink, "{raw}")?;
            }
        }
        RdfFormat::Turtle => {
            write_turtle_header(doc, sink, opts)?;
            let prefix = format!("{}{}/", WIKI_NS, doc.meta.language);
            for (subject, triples) in &blocks {
                write_turtle_block(subject, triples, &prefix, sink)?;
            }
            for raw in sorted_unknown(doc) {
                // A full-form N-Triples statement is valid Turtle.
                writeln!(sink, "{raw}")?;
            }
        }
    }
    Ok(count)
}

/// Serialize a whole corpus shard deterministically: documents in the given
/// order, one Turtle header at most.
pub fn serialize_corpus<W: Write>(
    docs: &[NifDocument],
    format: RdfFormat,
    sink: &mut W,
    opts: SerializeOptions,
) -> Result<u64> {
    let mut total = 0;
    match format {
        RdfFormat::NTriples => {
            for doc in docs {
                total += serialize(doc, format, sink, opts)?;
            }
        }
        RdfFormat::Turtle => {
            if let Some(first) = docs.first() {
                write_turtle_header(first, sink, opts)?;
                let prefix = format!("{}{}/", WIKI_NS, first.meta.language);
                for doc in docs {
                    let blocks = build_blocks(doc, opts);
                    total += blocks.iter().map(|b| b.1.len() as u64).sum::<u64>()
                        + doc.unknown_triples.len() as u64;
                    for (subject, triples) in &blocks {
                        write_turtle_block(subject, triples, &prefix, sink)?;
                    }
                    for raw in sorted_unknown(doc) {
                        writeln!(sink, "{raw}")?;
                    }
                }
            }
        }
    }
    Ok(total)
}

fn sorted_unknown(doc: &NifDocument) -> Vec<&str> {
    let mut lines: Vec<&str> = doc.unknown_triples.iter().map(|s| s.as_str()).collect();
    lines.sort_unstable();
    lines
}

fn nni(value: usize) -> Object {
    Object::typed(value.to_string(), XSD_NON_NEGATIVE_INTEGER)
}

/// Build all subject blocks in deterministic order: subjects sorted
/// lexicographically, predicates in the fixed documented order.
fn build_blocks(doc: &NifDocument, opts: SerializeOptions) -> Vec<(String, Vec<Triple>)> {
    let mut blocks: Vec<(String, Vec<Triple>)> = Vec::new();

    // Context.
    let mut ctx = Vec::new();
    let s = &doc.uri;
    ctx.push(Triple::new(s, RDF_TYPE, Object::iri(NIF_CONTEXT)));
    ctx.push(Triple::new(s, NIF_BEGIN_INDEX, nni(doc.begin)));
    ctx.push(Triple::new(s, NIF_END_INDEX, nni(doc.end)));
    ctx.push(Triple::new(
        s,
        NIF_IS_STRING,
        Object::plain(doc.text.clone()),
    ));
    ctx.push(Triple::new(
        s,
        NIF_SOURCE_URL,
        Object::iri(doc.meta.source_url.clone()),
    ));
    ctx.push(Triple::new(
        s,
        NIF_PRED_LANG,
        Object::iri(doc.meta.predominant_language.clone()),
    ));
    if let Some(first) = &doc.first_section {
        ctx.push(Triple::new(
            s,
            NIF_FIRST_SECTION,
            Object::iri(first.clone()),
        ));
    }
    if let Some(last) = &doc.last_section {
        ctx.push(Triple::new(s, NIF_LAST_SECTION, Object::iri(last.clone())));
    }
    for section in &doc.sections {
        ctx.push(Triple::new(
            s,
            NIF_HAS_SECTION,
            Object::iri(section.uri.clone()),
        ));
    }
    blocks.push((s.clone(), ctx));

    fn emit_section(
        section: &Section,
        blocks: &mut Vec<(String, Vec<Triple>)>,
        opts: SerializeOptions,
    ) {
        let s = &section.uri;
        let mut out = vec![
            Triple::new(s, RDF_TYPE, Object::iri(NIF_SECTION)),
            Triple::new(s, NIF_BEGIN_INDEX, nni(section.span.begin)),
            Triple::new(s, NIF_END_INDEX, nni(section.span.end)),
            Triple::new(
                s,
                NIF_REFERENCE_CONTEXT,
                Object::iri(section.reference_context.clone()),
            ),
        ];
        if let Some(first) = &section.first_subsection {
            out.push(Triple::new(
                s,
                NIF_FIRST_SECTION,
                Object::iri(first.clone()),
            ));
        }
        if let Some(last) = &section.last_subsection {
            out.push(Triple::new(s, NIF_LAST_SECTION, Object::iri(last.clone())));
        }
        for sub in &section.subsections {
            out.push(Triple::new(
                s,
                NIF_HAS_SECTION,
                Object::iri(sub.uri.clone()),
            ));
        }
        if let Some(first) = &section.first_paragraph {
            out.push(Triple::new(
                s,
                NIF_FIRST_PARAGRAPH,
                Object::iri(first.clone()),
            ));
        }
        if let Some(last) = &section.last_paragraph {
            out.push(Triple::new(
                s,
                NIF_LAST_PARAGRAPH,
                Object::iri(last.clone()),
            ));
        }
        for p in &section.paragraphs {
            out.push(Triple::new(
                s,
                NIF_HAS_PARAGRAPH,
                Object::iri(p.uri.clone()),
            ));
        }
        if let Some(next) = &section.next {
            out.push(Triple::new(s, NIF_NEXT_SECTION, Object::iri(next.clone())));
        }
        blocks.push((s.clone(), out));

        if let Some(title) = &section.title {
            emit_title(title, blocks);
        }
        for p in &section.paragraphs {
            emit_paragraph(p, blocks, opts);
        }
        for sub in &section.subsections {
            emit_section(sub, blocks, opts);
        }
    }

    fn emit_title(title: &Title, blocks: &mut Vec<(String, Vec<Triple>)>) {
        let s = &title.uri;
        let out = vec![
            Triple::new(s, RDF_TYPE, Object::iri(NIF_TITLE)),
            Triple::new(s, NIF_BEGIN_INDEX, nni(title.span.begin)),
            Triple::new(s, NIF_END_INDEX, nni(title.span.end)),
            Triple::new(s, NIF_ANCHOR_OF, Object::plain(title.text.clone())),
            Triple::new(
                s,
                NIF_REFERENCE_CONTEXT,
                Object::iri(title.reference_context.clone()),
            ),
            Triple::new(s, NIF_SUPER_STRING, Object::iri(title.section.clone())),
        ];
        blocks.push((s.clone(), out));
    }

    fn emit_paragraph(
        p: &Paragraph,
        blocks: &mut Vec<(String, Vec<Triple>)>,
        opts: SerializeOptions,
    ) {
        let s = &p.uri;
        let mut out = vec![
            Triple::new(s, RDF_TYPE, Object::iri(NIF_PARAGRAPH)),
            Triple::new(s, NIF_BEGIN_INDEX, nni(p.span.begin)),
            Triple::new(s, NIF_END_INDEX, nni(p.span.end)),
            Triple::new(
                s,
                NIF_REFERENCE_CONTEXT,
                Object::iri(p.reference_context.clone()),
            ),
        ];
        if let Some(next) = &p.next {
            out.push(Triple::new(
                s,
                NIF_NEXT_PARAGRAPH,
                Object::iri(next.clone()),
            ));
        }
        out.push(Triple::new(
            s,
            NIF_SUPER_STRING,
            Object::iri(p.section.clone()),
        ));
        blocks.push((s.clone(), out));

        for link in &p.links {
            let s = &link.uri;
            let class = match link.kind {
                LinkKind::Word => NIF_WORD,
                LinkKind::Phrase => NIF_PHRASE,
            };
            let mut out = vec![
                Triple::new(s, RDF_TYPE, Object::iri(class)),
                Triple::new(s, NIF_BEGIN_INDEX, nni(link.span.begin)),
                Triple::new(s, NIF_END_INDEX, nni(link.span.end)),
                Triple::new(s, NIF_ANCHOR_OF, Object::plain(link.anchor.clone())),
                Triple::new(
                    s,
                    NIF_REFERENCE_CONTEXT,
                    Object::iri(link.reference_context.clone()),
                ),
                Triple::new(s, NIF_SUPER_STRING, Object::iri(link.paragraph.clone())),
                Triple::new(s, ITSRDF_TA_IDENT_REF, Object::iri(link.target.clone())),
            ];
            if opts.mark_enriched && link.provenance == Provenance::Enriched {
                out.push(Triple::new(
                    s,
                    NFF_ENRICHED,
                    Object::typed("true", XSD_BOOLEAN),
                ));
            }
            blocks.push((s.clone(), out));
        }
    }

    for section in &doc.sections {
        emit_section(section, &mut blocks, opts);
    }

    blocks.sort_by(|a, b| a.0.cmp(&b.0));
    blocks
}

fn write_turtle_header<W: Write>(
    doc: &NifDocument,
    sink: &mut W,
    opts: SerializeOptions,
) -> Result<()> {
    writeln!(sink, "@prefix rdf: <{RDF_NS}> .")?;
    writeln!(sink, "@prefix xsd: <{XSD_NS}> .")?;
    writeln!(sink, "@prefix itsrdf: <{ITSRDF_NS}> .")?;
    writeln!(sink, "@prefix nif: <{NIF_NS}> .")?;
    writeln!(sink, "@prefix ex: <{}{}/> .", WIKI_NS, doc.meta.language)?;
    if opts.mark_enriched {
        writeln!(sink, "@prefix nff: <{NFF_NS}> .")?;
    }
    writeln!(sink)?;
    Ok(())
}

fn write_turtle_block<W: Write>(
    subject: &str,
    triples: &[Triple],
    ex_prefix: &str,
    sink: &mut W,
) -> Result<()> {
    if triples.is_empty() {
        return Ok(());
    }
    writeln!(sink, "{}", turtle_term_iri(subject, ex_prefix))?;
    for (i, t) in triples.iter().enumerate() {
        let pred = if t.predicate == RDF_TYPE {
            "a".to_string()
        } else {
            turtle_term_iri(&t.predicate, ex_prefix)
        };
        let obj = match &t.object {
            Object::Iri(iri) => turtle_term_iri(iri, ex_prefix),
            Object::Literal {
                lexical,
                datatype,
                lang,
            } => {
                let mut s = format!("\"{}\"", escape_literal(lexical));
                if let Some(dt) = datatype {
                    s.push_str("^^");
                    s.push_str(&turtle_term_iri(dt, ex_prefix));
                } else if let Some(l) = lang {
                    s.push('@');
                    s.push_str(l);
                }
                s
            }
        };
        let terminator = if i + 1 == triples.len() { " ." } else { " ;" };
        writeln!(sink, "  {pred} {obj}{terminator}")?;
    }
    writeln!(sink)?;
    Ok(())
}

/// Render an IRI as a Turtle term: a prefixed name when a known prefix
/// applies and the local part is expressible, the full `<iri>` form
/// otherwise.
fn turtle_term_iri(iri: &str, ex_prefix: &str) -> String {
    let prefixes: [(&str, &str); 5] = [
        (ex_prefix, "ex"),
        (NIF_NS, "nif"),
        (ITSRDF_NS, "itsrdf"),
        (XSD_NS, "xsd"),
        (NFF_NS, "nff"),
    ];
    for (ns, prefix) in prefixes {
        if let Some(local) = iri.strip_prefix(ns) {
            if let Some(escaped) = pn_local_escape(local) {
                return format!("{prefix}:{escaped}");
            }
        }
    }
    format!("<{iri}>")
}

/// Escape a PN_LOCAL per the Turtle grammar. Returns `None` when the local
/// name contains characters that cannot appear even escaped.
fn pn_local_escape(local: &str) -> Option<String> {
    if local.is_empty() {
        return None;
    }
    let mut out = String::with_capacity(local.len());
    for ch in local.chars() {
        match ch {
            c if c.is_alphanumeric() => out.push(c),
            '_' | '-' => out.push(ch),
            '~' | '.' | '!' | '$' | '&' | '\'' | '(' | ')' | '*' | '+' | ',' | ';' | '=' | '/'
            | '?' | '#' | '@' | '%' => {
                out.push('\\');
                out.push(ch);
            }
            _ => return None,
        }
    }
    Some(out)
}
