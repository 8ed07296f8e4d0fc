//! Structure extraction: traverse a cleaned tree, accumulate the article
//! text and emit a [`NifDocument`] with exact code-point offsets.
//!
//! Only elements tagged with the search marker contribute content. Marked
//! `h1..h6` elements open (sub-)sections — `h2` at the top level, deeper
//! headings nested under the nearest shallower one, content before the first
//! heading forming an untitled lead section. Every other marked element is a
//! paragraph root.
//!
//! Accumulation rules:
//!
//! * Within a title or paragraph, every maximal run of whitespace collapses
//!   to a single ASCII space and leading/trailing whitespace is dropped, so
//!   offsets do not depend on source indentation.
//! * A single `"\n"` separator is appended after each title and paragraph.
//!   Separators are part of the context string but outside all spans.
//! * Titles and paragraphs that normalize to empty text are dropped.

use ego_tree::NodeRef;
use percent_encoding::percent_decode_str;
use scraper::{ElementRef, Node};
use url::Url;

use crate::cleaner::{CleanedDocument, SEARCH_MARKER_ATTR};
use crate::error::{Error, Result};
use crate::model::{
    classify_link, encode_article_name, mint_uri, ArticleMeta, Link, NifDocument, Paragraph,
    Provenance, Section, Title, Unit,
};
use crate::text::Span;

/// Counters for content skipped during extraction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExtractDiagnostics {
    /// Anchors skipped for having an empty surface form or a same-page
    /// (fragment-only) href.
    pub skipped_links: usize,
    /// Marked non-heading elements found inside another marked element.
    pub nested_markers: usize,
}

/// Extract a document. See [`extract_with_diagnostics`] for skip counters.
pub fn extract(doc: &CleanedDocument, meta: &ArticleMeta) -> Result<NifDocument> {
    extract_with_diagnostics(doc, meta).map(|(d, _)| d)
}

pub fn extract_with_diagnostics(
    doc: &CleanedDocument,
    meta: &ArticleMeta,
) -> Result<(NifDocument, ExtractDiagnostics)> {
    let source_url = if doc.source_url.is_empty() {
        meta.source_url.clone()
    } else {
        doc.source_url.clone()
    };
    let mut st = ExtractState {
        meta,
        context_uri: meta.context_uri(),
        source_url,
        acc: Accum::default(),
        stack: Vec::new(),
        top: Vec::new(),
        diag: ExtractDiagnostics::default(),
    };
    walk_flow(doc.html.tree.root(), &mut st)?;
    st.close_sections(0)?;

    let mut sections = st.top;
    chain_sections(&mut sections);
    let first_section = sections.first().map(|s| s.uri.clone());
    let last_section = sections.last().map(|s| s.uri.clone());
    let end = st.acc.cp;
    Ok((
        NifDocument {
            meta: meta.clone(),
            uri: st.context_uri,
            text: st.acc.buf,
            begin: 0,
            end,
            sections,
            first_section,
            last_section,
            unknown_triples: Vec::new(),
        },
        st.diag,
    ))
}

/// Capture one anchor element as a link annotation starting at
/// `running_offset`. Returns `None` for anchors that are skipped: missing
/// href, fragment-only href, or empty surface form. The paragraph reference
/// is left empty; it is assigned when the link is attached to a paragraph.
pub fn capture_link(
    element: ElementRef<'_>,
    running_offset: usize,
    meta: &ArticleMeta,
) -> Result<Option<Link>> {
    let href = match element.value().attr("href") {
        Some(h) => h,
        None => return Ok(None),
    };
    if href.starts_with('#') {
        return Ok(None);
    }
    let mut acc = Accum::default();
    for piece in element.text() {
        acc.push_str(piece);
    }
    if acc.buf.is_empty() {
        return Ok(None);
    }
    let anchor = acc.buf;
    let span = Span::new(running_offset, running_offset + acc.cp);
    let target = resolve_link_target(href, &meta.source_url, &meta.language);
    let kind = classify_link(&anchor)?;
    Ok(Some(Link {
        uri: mint_uri(meta, Unit::Link(span))?,
        span,
        anchor,
        target,
        kind,
        provenance: Provenance::Original,
        paragraph: String::new(),
        reference_context: meta.context_uri(),
    }))
}

/// Resolve an href against the source origin and rewrite wiki-internal
/// targets to the canonical resource namespace. Same-host `/wiki/{name}`
/// paths become `http://dbpedia.org/resource/{name}` for English and
/// `http://{lang}.dbpedia.org/resource/{name}` otherwise, with
/// percent-encoding normalized and spaces folded to underscores; interwiki
/// and external links are kept verbatim.
pub fn resolve_link_target(href: &str, source_url: &str, language: &str) -> String {
    let base = match Url::parse(source_url) {
        Ok(b) => b,
        Err(_) => return href.to_string(),
    };
    let resolved = match base.join(href) {
        Ok(u) => u,
        Err(_) => return href.to_string(),
    };
    let internal = resolved.host_str() == base.host_str()
        && resolved.path().starts_with("/wiki/")
        && resolved.query().is_none();
    if !internal {
        return resolved.to_string();
    }
    let raw_name = &resolved.path()["/wiki/".len()..];
    let decoded = percent_decode_str(raw_name)
        .decode_utf8()
        .map(|c| c.into_owned())
        .unwrap_or_else(|_| raw_name.to_string());
    let name = decoded.replace(' ', "_");
    if language == "en" {
        format!("http://dbpedia.org/resource/{}", encode_article_name(&name))
    } else {
        format!(
            "http://{}.dbpedia.org/resource/{}",
            language,
            encode_article_name(&name)
        )
    }
}

/// Text accumulator with whitespace collapsing and lazy anchor marking.
#[derive(Default)]
struct Accum {
    buf: String,
    /// Code points in `buf`.
    cp: usize,
    /// Code point where the current title/paragraph region began.
    region_start: usize,
    region_start_byte: usize,
    /// A whitespace run is pending; it becomes one space when the next
    /// non-whitespace char arrives inside the same region.
    pending: bool,
    /// Set while inside an anchor element that should record its first
    /// emitted character.
    armed: bool,
    mark_cp: Option<usize>,
    mark_byte: usize,
}

impl Accum {
    fn begin_region(&mut self) {
        self.region_start = self.cp;
        self.region_start_byte = self.buf.len();
        self.pending = false;
        self.armed = false;
        self.mark_cp = None;
    }

    fn push_str(&mut self, s: &str) {
        for ch in s.chars() {
            if ch.is_whitespace() {
                self.pending = true;
                continue;
            }
            if self.pending && self.cp > self.region_start {
                self.buf.push(' ');
                self.cp += 1;
            }
            self.pending = false;
            if self.armed && self.mark_cp.is_none() {
                self.mark_cp = Some(self.cp);
                self.mark_byte = self.buf.len();
            }
            self.buf.push(ch);
            self.cp += 1;
        }
    }

    fn arm(&mut self) {
        self.armed = true;
        self.mark_cp = None;
    }

    /// End anchor marking; returns `(cp, byte)` of the anchor's first
    /// character when at least one character was emitted.
    fn disarm(&mut self) -> Option<(usize, usize)> {
        self.armed = false;
        self.mark_cp.take().map(|cp| (cp, self.mark_byte))
    }

    fn region_span(&self) -> Span {
        Span::new(self.region_start, self.cp)
    }

    fn region_text(&self) -> &str {
        &self.buf[self.region_start_byte..]
    }

    fn separator(&mut self) {
        self.buf.push('\n');
        self.cp += 1;
        self.pending = false;
    }
}

struct SectionBuilder {
    level: usize,
    title: Option<Title>,
    paragraphs: Vec<Paragraph>,
    subsections: Vec<Section>,
}

struct ExtractState<'a> {
    meta: &'a ArticleMeta,
    context_uri: String,
    source_url: String,
    acc: Accum,
    stack: Vec<SectionBuilder>,
    top: Vec<Section>,
    diag: ExtractDiagnostics,
}

fn heading_level(tag: &str) -> Option<usize> {
    match tag {
        "h1" | "h2" => Some(1),
        "h3" => Some(2),
        "h4" => Some(3),
        "h5" => Some(4),
        "h6" => Some(5),
        _ => None,
    }
}

fn node_label(el: &scraper::node::Element) -> String {
    match el.attr("id") {
        Some(id) => format!("<{} id=\"{}\">", el.name(), id),
        None => format!("<{}>", el.name()),
    }
}

/// Walk document flow outside marked content roots.
fn walk_flow(node: NodeRef<'_, Node>, st: &mut ExtractState) -> Result<()> {
    for child in node.children() {
        if let Node::Element(el) = child.value() {
            if el.attr(SEARCH_MARKER_ATTR).is_some() {
                match heading_level(el.name()) {
                    Some(level) => st.handle_heading(child, level)?,
                    None => st.handle_paragraph(child)?,
                }
                continue;
            }
            walk_flow(child, st)?;
        }
    }
    Ok(())
}

impl ExtractState<'_> {
    fn handle_heading(&mut self, node: NodeRef<'_, Node>, level: usize) -> Result<()> {
        self.acc.begin_region();
        self.collect_title_text(node);
        let title = if self.acc.region_span().is_empty() {
            None
        } else {
            let span = self.acc.region_span();
            let text = self.acc.region_text().to_string();
            self.acc.separator();
            Some(Title {
                uri: mint_uri(self.meta, Unit::Title(span))?,
                span,
                text,
                section: String::new(),
                reference_context: self.context_uri.clone(),
            })
        };
        self.close_sections(level)?;
        self.stack.push(SectionBuilder {
            level,
            title,
            paragraphs: Vec::new(),
            subsections: Vec::new(),
        });
        Ok(())
    }

    fn collect_title_text(&mut self, node: NodeRef<'_, Node>) {
        for child in node.children() {
            match child.value() {
                Node::Text(t) => self.acc.push_str(t),
                Node::Element(el) => {
                    if el.attr(SEARCH_MARKER_ATTR).is_some() {
                        self.diag.nested_markers += 1;
                    }
                    self.collect_title_text(child);
                }
                _ => {}
            }
        }
    }

    fn handle_paragraph(&mut self, node: NodeRef<'_, Node>) -> Result<()> {
        self.acc.begin_region();
        let mut pending_links: Vec<(Span, String, String)> = Vec::new();
        self.collect_paragraph_content(node, &mut pending_links)?;
        if self.acc.region_span().is_empty() {
            return Ok(());
        }
        let span = self.acc.region_span();
        let uri = mint_uri(self.meta, Unit::Paragraph(span))?;
        let mut links = Vec::with_capacity(pending_links.len());
        for (lspan, anchor, target) in pending_links {
            links.push(Link {
                uri: mint_uri(self.meta, Unit::Link(lspan))?,
                span: lspan,
                kind: classify_link(&anchor)?,
                anchor,
                target,
                provenance: Provenance::Original,
                paragraph: uri.clone(),
                reference_context: self.context_uri.clone(),
            });
        }
        self.acc.separator();
        if self.stack.is_empty() {
            // Implicit lead section.
            self.stack.push(SectionBuilder {
                level: 1,
                title: None,
                paragraphs: Vec::new(),
                subsections: Vec::new(),
            });
        }
        self.stack.last_mut().unwrap().paragraphs.push(Paragraph {
            uri,
            span,
            links,
            next: None,
            section: String::new(),
            reference_context: self.context_uri.clone(),
        });
        Ok(())
    }

    fn collect_paragraph_content(
        &mut self,
        node: NodeRef<'_, Node>,
        links: &mut Vec<(Span, String, String)>,
    ) -> Result<()> {
        for child in node.children() {
            match child.value() {
                Node::Text(t) => self.acc.push_str(t),
                Node::Element(el) => {
                    if el.attr(SEARCH_MARKER_ATTR).is_some() {
                        if heading_level(el.name()).is_some() {
                            return Err(Error::Extraction(format!(
                                "heading {} nested inside paragraph content",
                                node_label(el)
                            )));
                        }
                        self.diag.nested_markers += 1;
                    }
                    if el.name() == "a" {
                        match self.anchor_action(el) {
                            AnchorAction::Capture(target) => {
                                self.acc.arm();
                                self.collect_paragraph_content(child, links)?;
                                match self.acc.disarm() {
                                    Some((begin, byte)) if begin < self.acc.cp => {
                                        let anchor = self.acc.buf[byte..].to_string();
                                        links.push((Span::new(begin, self.acc.cp), anchor, target));
                                    }
                                    _ => self.diag.skipped_links += 1,
                                }
                            }
                            AnchorAction::Skip => {
                                self.diag.skipped_links += 1;
                                self.collect_paragraph_content(child, links)?;
                            }
                            AnchorAction::PlainText => {
                                self.collect_paragraph_content(child, links)?;
                            }
                        }
                    } else {
                        self.collect_paragraph_content(child, links)?;
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn anchor_action(&self, el: &scraper::node::Element) -> AnchorAction {
        match el.attr("href") {
            None => AnchorAction::PlainText,
            Some(h) if h.starts_with('#') => AnchorAction::Skip,
            Some(h) => AnchorAction::Capture(resolve_link_target(
                h,
                &self.source_url,
                &self.meta.language,
            )),
        }
    }

    /// Finalize and pop every open section of level >= `level`, attaching
    /// each to its parent (or the top-level list).
    fn close_sections(&mut self, level: usize) -> Result<()> {
        while self.stack.last().is_some_and(|s| s.level >= level.max(1)) {
            let builder = self.stack.pop().unwrap();
            if let Some(section) = finalize_section(builder, self.meta)? {
                match self.stack.last_mut() {
                    Some(parent) => parent.subsections.push(section),
                    None => self.top.push(section),
                }
            }
        }
        if level == 0 {
            debug_assert!(self.stack.is_empty());
        }
        Ok(())
    }
}

enum AnchorAction {
    Capture(String),
    Skip,
    PlainText,
}

fn finalize_section(builder: SectionBuilder, meta: &ArticleMeta) -> Result<Option<Section>> {
    let SectionBuilder {
        title,
        mut paragraphs,
        mut subsections,
        ..
    } = builder;
    let begin = title
        .as_ref()
        .map(|t| t.span.begin)
        .or_else(|| paragraphs.first().map(|p| p.span.begin))
        .or_else(|| subsections.first().map(|s| s.span.begin));
    let begin = match begin {
        Some(b) => b,
        None => return Ok(None), // nothing extractable in this section
    };
    let end = subsections
        .last()
        .map(|s| s.span.end)
        .or_else(|| paragraphs.last().map(|p| p.span.end))
        .or_else(|| title.as_ref().map(|t| t.span.end))
        .unwrap();
    let span = Span::new(begin, end);
    let uri = mint_uri(meta, Unit::Section(span))?;

    let mut title = title;
    if let Some(t) = title.as_mut() {
        t.section = uri.clone();
    }
    for p in paragraphs.iter_mut() {
        p.section = uri.clone();
    }
    for i in 0..paragraphs.len() {
        let next = paragraphs.get(i + 1).map(|p| p.uri.clone());
        paragraphs[i].next = next;
    }
    let first_paragraph = paragraphs.first().map(|p| p.uri.clone());
    let last_paragraph = paragraphs.last().map(|p| p.uri.clone());
    chain_sections(&mut subsections);
    let first_subsection = subsections.first().map(|s| s.uri.clone());
    let last_subsection = subsections.last().map(|s| s.uri.clone());

    Ok(Some(Section {
        uri,
        span,
        title,
        paragraphs,
        subsections,
        next: None,
        first_paragraph,
        last_paragraph,
        first_subsection,
        last_subsection,
        reference_context: meta.context_uri(),
    }))
}

/// Set the `next` pointers of a sibling list in document order.
fn chain_sections(sections: &mut [Section]) {
    for i in 0..sections.len() {
        let next = sections.get(i + 1).map(|s| s.uri.clone());
        sections[i].next = next;
    }
}
