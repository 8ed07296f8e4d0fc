//! Link enrichment: annotate unlinked re-occurrences of anchors already
//! linked in the article.
//!
//! The workflow collects every link-anchor pair in the article, orders the
//! pairs by anchor length from longest to shortest, and scans the whole
//! context for further occurrences. Candidate matches are processed in
//! (length descending, position ascending) order; a candidate is kept only
//! when it is word-boundary-aligned, lies inside a paragraph of a
//! non-excluded section, and does not overlap any existing or already-added
//! annotation, so a shorter anchor never lands inside a longer match
//! ("East Berlin" wins over its inner "Berlin").
//!
//! Matching is exact and case-sensitive. A match is boundary-aligned when
//! the code points immediately before and after it are absent or are
//! neither letters nor digits.

use std::collections::{BTreeMap, HashMap};

use crate::error::Result;
use crate::model::{classify_link, mint_uri, Link, NifDocument, Provenance, Section, Unit};
use crate::stats::percent_new;
use crate::text::{cp_len, OffsetMap, Span};

/// Link-anchor pairs collected from one article, longest anchor first, ties
/// broken by first occurrence in document order. Each anchor appears once;
/// the first-seen target wins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorDictionary {
    entries: Vec<AnchorEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorEntry {
    pub anchor: String,
    pub target: String,
    /// Code-point length of the anchor.
    pub len: usize,
}

impl AnchorDictionary {
    pub fn entries(&self) -> &[AnchorEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Collect the anchor dictionary of `doc`. Anchors from excluded sections
/// are collected too; exclusion applies only to placing new links.
pub fn collect_anchors(doc: &NifDocument) -> AnchorDictionary {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    let mut entries: Vec<AnchorEntry> = Vec::new();
    for link in doc.walk_links() {
        if link.anchor.is_empty() {
            continue;
        }
        if !seen.contains_key(link.anchor.as_str()) {
            seen.insert(link.anchor.as_str(), entries.len());
            entries.push(AnchorEntry {
                anchor: link.anchor.clone(),
                target: link.target.clone(),
                len: cp_len(&link.anchor),
            });
        }
    }
    // Stable sort keeps first-occurrence order among equal lengths.
    entries.sort_by_key(|e| std::cmp::Reverse(e.len));
    AnchorDictionary { entries }
}

/// Section titles that suppress enrichment, matched case-insensitively on
/// trimmed title text.
#[derive(Debug, Clone)]
pub struct ExclusionList {
    titles: Vec<String>,
}

impl ExclusionList {
    pub fn new<S: AsRef<str>>(titles: impl IntoIterator<Item = S>) -> Self {
        ExclusionList {
            titles: titles
                .into_iter()
                .map(|t| t.as_ref().trim().to_lowercase())
                .collect(),
        }
    }

    /// True when a section title matches the list.
    pub fn matches_title(&self, title: Option<&str>) -> bool {
        match title {
            Some(t) => self.titles.iter().any(|x| x == &t.trim().to_lowercase()),
            None => false,
        }
    }
}

impl Default for ExclusionList {
    fn default() -> Self {
        ExclusionList::new(crate::profile::DEFAULT_EXCLUDED_SECTIONS)
    }
}

/// True iff the section's own title is excluded or any ancestor was.
pub fn is_excluded_section(
    section: &Section,
    ancestor_excluded: bool,
    exclusions: &ExclusionList,
) -> bool {
    ancestor_excluded || exclusions.matches_title(section.title.as_ref().map(|t| t.text.as_str()))
}

/// Per-article enrichment counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnrichmentReport {
    pub links_before: u64,
    pub unique_anchors: u64,
    pub links_after: u64,
    /// `100 × (after − before) / before`, rounded half-up to two decimals;
    /// zero when `links_before` is zero.
    pub percent_new: f64,
    /// Matches suppressed because they fell in an excluded section.
    pub per_section_skipped: u64,
}

impl EnrichmentReport {
    pub fn empty() -> EnrichmentReport {
        EnrichmentReport {
            links_before: 0,
            unique_anchors: 0,
            links_after: 0,
            percent_new: 0.0,
            per_section_skipped: 0,
        }
    }

    pub fn merge(&self, other: &EnrichmentReport) -> EnrichmentReport {
        let before = self.links_before + other.links_before;
        let after = self.links_after + other.links_after;
        EnrichmentReport {
            links_before: before,
            unique_anchors: self.unique_anchors + other.unique_anchors,
            links_after: after,
            percent_new: percent_new(before, after).unwrap_or(0.0),
            per_section_skipped: self.per_section_skipped + other.per_section_skipped,
        }
    }
}

/// A paragraph's place in the document tree plus its exclusion state.
struct ParagraphSlot {
    span: Span,
    uri: String,
    /// Index in flattened DFS paragraph order.
    index: usize,
    excluded: bool,
}

/// Enrich one document. Existing annotations are never modified; new links
/// carry [`Provenance::Enriched`]. Pure per document and deterministic.
pub fn enrich(
    doc: &NifDocument,
    exclusions: &ExclusionList,
) -> Result<(NifDocument, EnrichmentReport)> {
    let dictionary = collect_anchors(doc);
    let links_before = doc.link_count() as u64;

    let mut slots: Vec<ParagraphSlot> = Vec::new();
    collect_slots(&doc.sections, false, exclusions, &mut slots);
    // Containment lookups binary-search on begin; paragraph spans are
    // disjoint and ordered in a valid document.
    let mut by_begin: Vec<usize> = (0..slots.len()).collect();
    by_begin.sort_by_key(|&i| slots[i].span.begin);

    // Occupied spans: begin → end, never overlapping.
    let mut occupied: BTreeMap<usize, usize> = BTreeMap::new();
    for link in doc.walk_links() {
        occupied.insert(link.span.begin, link.span.end);
    }

    let map = OffsetMap::new(&doc.text);
    let mut additions: Vec<(usize, Link)> = Vec::new();
    let mut per_section_skipped = 0u64;

    // Process candidates in (length desc, position asc) order; among equal
    // lengths and positions the dictionary's first-occurrence order applies.
    let mut i = 0;
    while i < dictionary.entries.len() {
        let len = dictionary.entries[i].len;
        let mut j = i;
        while j < dictionary.entries.len() && dictionary.entries[j].len == len {
            j += 1;
        }
        // (position, dictionary rank) for the equal-length group.
        let mut group: Vec<(usize, usize)> = Vec::new();
        for rank in i..j {
            for begin in occurrences(&doc.text, &dictionary.entries[rank].anchor, &map) {
                group.push((begin, rank));
            }
        }
        group.sort_unstable();
        for (begin, rank) in group {
            let entry = &dictionary.entries[rank];
            let span = Span::new(begin, begin + entry.len);
            if !boundary_aligned(&doc.text, &map, span) {
                continue;
            }
            let slot = match containing_slot(&slots, &by_begin, span) {
                Some(s) => s,
                None => continue,
            };
            if overlaps_occupied(&occupied, span) {
                continue;
            }
            if slot.excluded {
                per_section_skipped += 1;
                continue;
            }
            occupied.insert(span.begin, span.end);
            additions.push((
                slot.index,
                Link {
                    uri: mint_uri(&doc.meta, Unit::Link(span))?,
                    span,
                    anchor: entry.anchor.clone(),
                    target: entry.target.clone(),
                    kind: classify_link(&entry.anchor)?,
                    provenance: Provenance::Enriched,
                    paragraph: slot.uri.clone(),
                    reference_context: doc.uri.clone(),
                },
            ));
        }
        i = j;
    }

    let mut enriched = doc.clone();
    if !additions.is_empty() {
        let mut per_slot: HashMap<usize, Vec<Link>> = HashMap::new();
        for (slot, link) in additions {
            per_slot.entry(slot).or_default().push(link);
        }
        let mut cursor = 0usize;
        apply_additions(&mut enriched.sections, &mut cursor, &mut per_slot);
    }

    let links_after = enriched.link_count() as u64;
    let report = EnrichmentReport {
        links_before,
        unique_anchors: dictionary.len() as u64,
        links_after,
        percent_new: percent_new(links_before, links_after)?,
        per_section_skipped,
    };
    Ok((enriched, report))
}

fn collect_slots(
    sections: &[Section],
    ancestor_excluded: bool,
    exclusions: &ExclusionList,
    slots: &mut Vec<ParagraphSlot>,
) {
    for section in sections {
        let excluded = is_excluded_section(section, ancestor_excluded, exclusions);
        for p in &section.paragraphs {
            slots.push(ParagraphSlot {
                span: p.span,
                uri: p.uri.clone(),
                index: slots.len(),
                excluded,
            });
        }
        collect_slots(&section.subsections, excluded, exclusions, slots);
    }
}

fn apply_additions(
    sections: &mut [Section],
    cursor: &mut usize,
    per_slot: &mut HashMap<usize, Vec<Link>>,
) {
    for section in sections {
        for p in &mut section.paragraphs {
            if let Some(new_links) = per_slot.remove(cursor) {
                p.links.extend(new_links);
                p.links.sort_by_key(|l| l.span.begin);
            }
            *cursor += 1;
        }
        apply_additions(&mut section.subsections, cursor, per_slot);
    }
}

/// All code-point begin offsets where `anchor` occurs in `text`, ascending.
/// Self-overlapping occurrences are included.
fn occurrences(text: &str, anchor: &str, map: &OffsetMap) -> Vec<usize> {
    let mut out = Vec::new();
    let mut from = 0usize;
    while let Some(rel) = text[from..].find(anchor) {
        let at = from + rel;
        out.push(map.byte_to_cp(at));
        from = at + text[at..].chars().next().map_or(1, |c| c.len_utf8());
    }
    out
}

fn boundary_aligned(text: &str, map: &OffsetMap, span: Span) -> bool {
    let before_ok = map
        .char_before(text, span.begin)
        .is_none_or(|c| !c.is_alphanumeric());
    let after_ok = map
        .char_at(text, span.end)
        .is_none_or(|c| !c.is_alphanumeric());
    before_ok && after_ok
}

fn containing_slot<'a>(
    slots: &'a [ParagraphSlot],
    by_begin: &[usize],
    span: Span,
) -> Option<&'a ParagraphSlot> {
    // Last slot whose begin <= span.begin.
    let pos = by_begin.partition_point(|&i| slots[i].span.begin <= span.begin);
    if pos == 0 {
        return None;
    }
    let slot = &slots[by_begin[pos - 1]];
    slot.span.contains(&span).then_some(slot)
}

fn overlaps_occupied(occupied: &BTreeMap<usize, usize>, span: Span) -> bool {
    occupied
        .range(..span.end)
        .next_back()
        .is_some_and(|(_, &end)| end > span.begin)
}
