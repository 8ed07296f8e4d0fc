//! Shared helpers for integration tests: a seeded random document generator
//! and an independent brute-force enrichment oracle.

#![allow(dead_code)]

use nif_forge_core::enricher::ExclusionList;
use nif_forge_core::model::{
    classify_link, encode_article_name, mint_uri, ArticleMeta, Link, NifDocument, Paragraph,
    Provenance, Section, Title, Unit,
};
use nif_forge_core::text::{cp_len, Span};
use rand::prelude::*;
use rand::rngs::StdRng;

pub const WORD_POOL: [&str; 40] = [
    "alpha",
    "bridge",
    "capital",
    "delta",
    "empire",
    "forest",
    "glacier",
    "harbor",
    "island",
    "jungle",
    "kingdom",
    "lagoon",
    "meadow",
    "north",
    "ocean",
    "plateau",
    "quarry",
    "river",
    "steppe",
    "tundra",
    "valley",
    "winter",
    "deep",
    "east",
    "west",
    "south",
    "frozen",
    "ancient",
    "modern",
    "upper",
    "lower",
    "great",
    "caf\u{e9}",
    "z\u{fc}rich",
    "\u{5317}\u{4eac}",
    "fj\u{f6}rd",
    "people",
    "crossed",
    "settled",
    "explored",
];

pub const NORMAL_TITLES: [&str; 6] = [
    "History",
    "Geography",
    "Culture",
    "Economy",
    "Science",
    "Demographics",
];

pub const EXCLUDED_TITLES: [&str; 3] = ["References", "Notes", "See also"];

#[derive(Debug, Clone)]
pub struct GenOptions {
    pub max_words: usize,
    pub max_anchors: usize,
    pub allow_excluded_sections: bool,
    pub allow_revision: bool,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            max_words: 300,
            max_anchors: 8,
            allow_excluded_sections: true,
            allow_revision: true,
        }
    }
}

struct PendingLink {
    span: Span,
    anchor: String,
    target: String,
}

struct PendingParagraph {
    span: Span,
    links: Vec<PendingLink>,
}

struct PendingSection {
    title: Option<(Span, String)>,
    paragraphs: Vec<PendingParagraph>,
    subsections: Vec<PendingSection>,
}

struct Builder {
    text: String,
    cp: usize,
}

impl Builder {
    fn push_piece(&mut self, s: &str, first: bool) -> Span {
        if !first {
            self.text.push(' ');
            self.cp += 1;
        }
        let begin = self.cp;
        self.text.push_str(s);
        self.cp += cp_len(s);
        Span::new(begin, self.cp)
    }

    fn separator(&mut self) {
        self.text.push('\n');
        self.cp += 1;
    }
}

/// Generate one valid document: random sections, paragraphs and links over
/// a word pool, with every invariant holding by construction. The first
/// occurrence of an anchor is always linked; later occurrences are linked
/// with probability one half, leaving unlinked mentions for enrichment.
pub fn random_document(rng: &mut StdRng, opts: &GenOptions) -> NifDocument {
    let title_word = WORD_POOL[rng.random_range(0..20)];
    let article = format!(
        "{}{}_{}",
        title_word[0..1].to_uppercase(),
        &title_word[1..],
        rng.random_range(0..10_000)
    );
    let mut meta = ArticleMeta::new(&article, "en", "2016-10").unwrap();
    if opts.allow_revision && rng.random_bool(0.3) {
        meta = meta.with_revision(&format!("{}", rng.random_range(1_000..9_999_999)));
    }

    // Anchor vocabulary: distinct 1..=3 word phrases.
    let n_anchors = rng.random_range(1..=opts.max_anchors.max(1));
    let mut anchors: Vec<(String, String)> = Vec::new();
    while anchors.len() < n_anchors {
        let words = rng.random_range(1..=3);
        let phrase = (0..words)
            .map(|_| WORD_POOL[rng.random_range(0..WORD_POOL.len())])
            .collect::<Vec<_>>()
            .join(" ");
        if anchors.iter().any(|(a, _)| *a == phrase) {
            continue;
        }
        let target = format!(
            "http://dbpedia.org/resource/{}",
            encode_article_name(&phrase.replace(' ', "_"))
        );
        anchors.push((phrase, target));
    }

    let mut b = Builder {
        text: String::new(),
        cp: 0,
    };
    let mut words_left = opts.max_words as i64;
    let mut linked_once = vec![false; anchors.len()];

    let mut build_paragraph = |rng: &mut StdRng, b: &mut Builder, words_left: &mut i64| {
        let n_items = rng.random_range(3..=12);
        let begin = b.cp;
        let mut links = Vec::new();
        for item in 0..n_items {
            // Always place at least one word so paragraph spans are
            // non-empty and pairwise distinct.
            if *words_left <= 0 && item > 0 {
                break;
            }
            // First item stays a plain word so spans of paragraph and first
            // link never coincide.
            if item > 0 && rng.random_bool(0.35) {
                let idx = rng.random_range(0..anchors.len());
                let (anchor, target) = &anchors[idx];
                let span = b.push_piece(anchor, item == 0);
                *words_left -= anchor.split_whitespace().count() as i64;
                let linked = if !linked_once[idx] {
                    linked_once[idx] = true;
                    true
                } else {
                    rng.random_bool(0.5)
                };
                if linked {
                    links.push(PendingLink {
                        span,
                        anchor: anchor.clone(),
                        target: target.clone(),
                    });
                }
            } else {
                let word = WORD_POOL[rng.random_range(0..WORD_POOL.len())];
                b.push_piece(word, item == 0);
                *words_left -= 1;
            }
        }
        let span = Span::new(begin, b.cp);
        b.separator();
        PendingParagraph { span, links }
    };

    let n_sections = rng.random_range(1..=3);
    let mut pending: Vec<PendingSection> = Vec::new();
    for s in 0..n_sections {
        if words_left <= 0 {
            break;
        }
        let untitled_lead = s == 0 && rng.random_bool(0.5);
        let title = if untitled_lead {
            None
        } else {
            let text = if opts.allow_excluded_sections && rng.random_bool(0.25) {
                EXCLUDED_TITLES[rng.random_range(0..EXCLUDED_TITLES.len())].to_string()
            } else {
                NORMAL_TITLES[rng.random_range(0..NORMAL_TITLES.len())].to_string()
            };
            let span = b.push_piece(&text, true);
            b.separator();
            Some((span, text))
        };
        let n_paragraphs = rng.random_range(1..=3);
        let paragraphs = (0..n_paragraphs)
            .map(|_| build_paragraph(rng, &mut b, &mut words_left))
            .collect();
        let subsections = if rng.random_bool(0.3) && words_left > 0 {
            let text = NORMAL_TITLES[rng.random_range(0..NORMAL_TITLES.len())].to_string();
            let span = b.push_piece(&text, true);
            b.separator();
            vec![PendingSection {
                title: Some((span, text)),
                paragraphs: vec![build_paragraph(rng, &mut b, &mut words_left)],
                subsections: Vec::new(),
            }]
        } else {
            Vec::new()
        };
        pending.push(PendingSection {
            title,
            paragraphs,
            subsections,
        });
    }

    let context_uri = meta.context_uri();
    let mut sections: Vec<Section> = pending
        .into_iter()
        .map(|p| realize_section(p, &meta, &context_uri))
        .collect();
    for i in 0..sections.len() {
        let next = sections.get(i + 1).map(|s| s.uri.clone());
        sections[i].next = next;
    }
    let first_section = sections.first().map(|s| s.uri.clone());
    let last_section = sections.last().map(|s| s.uri.clone());

    NifDocument {
        meta,
        uri: context_uri,
        begin: 0,
        end: cp_len(&b.text),
        text: b.text,
        sections,
        first_section,
        last_section,
        unknown_triples: Vec::new(),
    }
}

fn realize_section(pending: PendingSection, meta: &ArticleMeta, context_uri: &str) -> Section {
    let begin = pending
        .title
        .as_ref()
        .map(|(s, _)| s.begin)
        .or_else(|| pending.paragraphs.first().map(|p| p.span.begin))
        .or_else(|| {
            pending.subsections.first().and_then(|s| {
                s.title
                    .as_ref()
                    .map(|(sp, _)| sp.begin)
                    .or_else(|| s.paragraphs.first().map(|p| p.span.begin))
            })
        })
        .unwrap_or(0);
    let mut subsections: Vec<Section> = pending
        .subsections
        .into_iter()
        .map(|s| realize_section(s, meta, context_uri))
        .collect();
    let end = subsections
        .last()
        .map(|s| s.span.end)
        .or_else(|| pending.paragraphs.last().map(|p| p.span.end))
        .or_else(|| pending.title.as_ref().map(|(s, _)| s.end))
        .unwrap_or(begin);
    let span = Span::new(begin, end);
    let uri = mint_uri(meta, Unit::Section(span)).unwrap();

    let title = pending.title.map(|(tspan, text)| Title {
        uri: mint_uri(meta, Unit::Title(tspan)).unwrap(),
        span: tspan,
        text,
        section: uri.clone(),
        reference_context: context_uri.to_string(),
    });

    let mut paragraphs: Vec<Paragraph> = pending
        .paragraphs
        .into_iter()
        .map(|p| {
            let p_uri = mint_uri(meta, Unit::Paragraph(p.span)).unwrap();
            let links = p
                .links
                .into_iter()
                .map(|l| Link {
                    uri: mint_uri(meta, Unit::Link(l.span)).unwrap(),
                    span: l.span,
                    kind: classify_link(&l.anchor).unwrap(),
                    anchor: l.anchor,
                    target: l.target,
                    provenance: Provenance::Original,
                    paragraph: p_uri.clone(),
                    reference_context: context_uri.to_string(),
                })
                .collect();
            Paragraph {
                uri: p_uri,
                span: p.span,
                links,
                next: None,
                section: uri.clone(),
                reference_context: context_uri.to_string(),
            }
        })
        .collect();
    for i in 0..paragraphs.len() {
        let next = paragraphs.get(i + 1).map(|p| p.uri.clone());
        paragraphs[i].next = next;
    }
    for i in 0..subsections.len() {
        let next = subsections.get(i + 1).map(|s| s.uri.clone());
        subsections[i].next = next;
    }

    Section {
        first_paragraph: paragraphs.first().map(|p| p.uri.clone()),
        last_paragraph: paragraphs.last().map(|p| p.uri.clone()),
        first_subsection: subsections.first().map(|s| s.uri.clone()),
        last_subsection: subsections.last().map(|s| s.uri.clone()),
        uri,
        span,
        title,
        paragraphs,
        subsections,
        next: None,
        reference_context: context_uri.to_string(),
    }
}

/// One annotation the oracle expects enrichment to add.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OracleAnnotation {
    pub span: (usize, usize),
    pub anchor: String,
    pub target: String,
}

/// Brute-force enrichment oracle, independent of the implementation path:
/// enumerate every boundary-aligned occurrence of every collected anchor by
/// scanning the code-point array position by position, then keep candidates
/// greedily in (length desc, position asc) order, rejecting overlaps with
/// existing or kept annotations and occurrences outside paragraphs of
/// non-excluded sections.
pub fn oracle_enrich(doc: &NifDocument, exclusions: &ExclusionList) -> Vec<OracleAnnotation> {
    let chars: Vec<char> = doc.text.chars().collect();

    // Dictionary: first-seen target per anchor, in document order.
    let mut dict: Vec<(String, String)> = Vec::new();
    for link in doc.walk_links() {
        if link.anchor.is_empty() || dict.iter().any(|(a, _)| *a == link.anchor) {
            continue;
        }
        dict.push((link.anchor.clone(), link.target.clone()));
    }

    // Paragraph regions with exclusion state.
    fn regions(
        sections: &[Section],
        ancestor_excluded: bool,
        exclusions: &ExclusionList,
        out: &mut Vec<(usize, usize, bool)>,
    ) {
        for s in sections {
            let excluded = ancestor_excluded
                || exclusions.matches_title(s.title.as_ref().map(|t| t.text.as_str()));
            for p in &s.paragraphs {
                out.push((p.span.begin, p.span.end, excluded));
            }
            regions(&s.subsections, excluded, exclusions, out);
        }
    }
    let mut paragraph_regions = Vec::new();
    regions(&doc.sections, false, exclusions, &mut paragraph_regions);

    // All candidates: (len, pos, dict rank).
    let mut candidates: Vec<(usize, usize, usize)> = Vec::new();
    for (rank, (anchor, _)) in dict.iter().enumerate() {
        let a: Vec<char> = anchor.chars().collect();
        if a.is_empty() || a.len() > chars.len() {
            continue;
        }
        for pos in 0..=(chars.len() - a.len()) {
            if chars[pos..pos + a.len()] != a[..] {
                continue;
            }
            let before_ok = pos == 0 || !chars[pos - 1].is_alphanumeric();
            let after_ok = pos + a.len() == chars.len() || !chars[pos + a.len()].is_alphanumeric();
            if before_ok && after_ok {
                candidates.push((a.len(), pos, rank));
            }
        }
    }
    candidates.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    // Greedy keep, rejecting overlaps.
    let mut kept_spans: Vec<(usize, usize)> = doc
        .walk_links()
        .iter()
        .map(|l| (l.span.begin, l.span.end))
        .collect();
    let mut out = Vec::new();
    for (len, pos, rank) in candidates {
        let span = (pos, pos + len);
        if kept_spans.iter().any(|(b, e)| *b < span.1 && span.0 < *e) {
            continue;
        }
        let region = paragraph_regions
            .iter()
            .find(|(b, e, _)| *b <= span.0 && span.1 <= *e);
        match region {
            Some((_, _, excluded)) if !excluded => {
                kept_spans.push(span);
                out.push(OracleAnnotation {
                    span,
                    anchor: dict[rank].0.clone(),
                    target: dict[rank].1.clone(),
                });
            }
            _ => {}
        }
    }
    out.sort();
    out
}

/// The Enriched annotations of a document, in oracle-comparable form.
pub fn enriched_annotations(doc: &NifDocument) -> Vec<OracleAnnotation> {
    let mut out: Vec<OracleAnnotation> = doc
        .walk_links()
        .into_iter()
        .filter(|l| l.provenance == Provenance::Enriched)
        .map(|l| OracleAnnotation {
            span: (l.span.begin, l.span.end),
            anchor: l.anchor.clone(),
            target: l.target.clone(),
        })
        .collect();
    out.sort();
    out
}

pub fn seeded(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}
