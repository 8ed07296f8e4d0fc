//! HTML cleansing driven by a [`CleaningProfile`].
//!
//! `clean` parses the input with browser-grade error recovery, deletes every
//! subtree matched by a remove selector, substitutes replace-matched elements
//! with their replacement text, and tags search-matched elements with the
//! [`SEARCH_MARKER_ATTR`] attribute for the structure extractor. Application
//! order is remove, then replace, then search-marking, so replacements never
//! happen inside doomed subtrees.

use ego_tree::NodeId;
use html5ever::{LocalName, QualName};
use scraper::node::Text;
use scraper::{Html, Node, Selector};

use crate::error::{Error, Result};
use crate::profile::CleaningProfile;

/// Attribute the cleaner sets on search-matched elements.
pub const SEARCH_MARKER_ATTR: &str = "data-nif-search";

/// A cleaned element tree, ready for structure extraction.
#[derive(Debug, Clone)]
pub struct CleanedDocument {
    pub html: Html,
    pub source_url: String,
    pub language: String,
}

impl CleanedDocument {
    /// Serialize the tree back to HTML.
    pub fn to_html(&self) -> String {
        self.html.html()
    }

    /// Concatenated raw text content of the whole tree, in document order.
    pub fn text_content(&self) -> String {
        let mut out = String::new();
        for node in self.html.tree.root().descendants() {
            if let Node::Text(t) = node.value() {
                out.push_str(t);
            }
        }
        out
    }
}

fn matching_ids(doc: &Html, selector: &Selector) -> Vec<NodeId> {
    doc.select(selector).map(|el| el.id()).collect()
}

/// Reduce a rendered HTML article to the element tree destined for the
/// corpus. Pure function of its inputs; distinct documents may be cleaned
/// concurrently. Malformed HTML is recovered, an empty byte stream is an
/// error.
pub fn clean(html: &str, profile: &CleaningProfile, source_url: &str) -> Result<CleanedDocument> {
    if html.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut doc = Html::parse_document(html);

    // Remove pass. All matches are collected up front, so the surviving node
    // set does not depend on selector order.
    let mut doomed: Vec<NodeId> = Vec::new();
    for sel in &profile.remove {
        doomed.extend(matching_ids(&doc, &sel.selector));
    }
    for id in doomed {
        if let Some(mut node) = doc.tree.get_mut(id) {
            node.detach();
        }
    }

    // Replace pass, rule by rule in profile order.
    for rule in &profile.replace {
        let ids = matching_ids(&doc, &rule.selector.selector);
        for id in ids {
            if let Some(mut node) = doc.tree.get_mut(id) {
                node.insert_before(Node::Text(Text {
                    text: rule.replacement.as_str().into(),
                }));
                node.detach();
            }
        }
    }

    // Search-marking pass.
    let marker = QualName::new(None, ns(), LocalName::from(SEARCH_MARKER_ATTR));
    let mut marked: Vec<NodeId> = Vec::new();
    for sel in &profile.search {
        marked.extend(matching_ids(&doc, &sel.selector));
    }
    for id in marked {
        if let Some(mut node) = doc.tree.get_mut(id) {
            if let Node::Element(el) = node.value() {
                // attrs is kept sorted; Element::attr relies on binary search.
                if let Err(pos) = el.attrs.binary_search_by(|(name, _)| name.cmp(&marker)) {
                    el.attrs.insert(pos, (marker.clone(), "1".into()));
                }
            }
        }
    }

    Ok(CleanedDocument {
        html: doc,
        source_url: source_url.to_string(),
        language: profile.language.clone(),
    })
}

fn ns() -> html5ever::Namespace {
    html5ever::Namespace::from("")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::CleaningProfile;

    const URL: &str = "https://en.wikipedia.org/wiki/Test";

    fn profile(json: &str) -> CleaningProfile {
        CleaningProfile::from_json(json).unwrap()
    }

    #[test]
    fn remove_selector_deletes_subtree() {
        let p = profile(r#"{"remove":["table.infobox"]}"#);
        let html = r#"<html><body><table class="infobox"><tr><td>box</td></tr></table><p>kept</p></body></html>"#;
        let cleaned = clean(html, &p, URL).unwrap();
        let text = cleaned.text_content();
        assert!(!text.contains("box"));
        assert!(text.contains("kept"));
        assert!(!cleaned.to_html().contains("infobox"));
    }

    #[test]
    fn replace_selector_substitutes_text_node() {
        let p = profile(r#"{"replace":[{"selector":"br","replacement":"\n"}]}"#);
        let cleaned = clean("<p>one<br>two</p>", &p, URL).unwrap();
        assert_eq!(cleaned.text_content(), "one\ntwo");
        assert!(!cleaned.to_html().contains("<br>"));
    }

    #[test]
    fn empty_profile_is_identity() {
        let p = CleaningProfile::empty("*");
        let html = "<html><head></head><body><p>a <b>b</b> c</p></body></html>";
        let cleaned = clean(html, &p, URL).unwrap();
        let parsed = Html::parse_document(html);
        assert_eq!(cleaned.html.html(), parsed.html());
    }

    #[test]
    fn empty_input_is_an_error() {
        let p = CleaningProfile::empty("*");
        assert!(matches!(clean("", &p, URL), Err(Error::EmptyInput)));
    }

    #[test]
    fn malformed_html_is_recovered() {
        let p = profile(r#"{"remove":["i"]}"#);
        let cleaned = clean("<p>unclosed <i>nested <p>next", &p, URL).unwrap();
        assert!(cleaned.text_content().contains("unclosed"));
        assert!(!cleaned.text_content().contains("nested"));
    }

    #[test]
    fn search_marker_is_set() {
        let p = profile(r#"{"search":["h2","p"]}"#);
        let cleaned = clean("<h2>T</h2><p id=\"x\">body</p>", &p, URL).unwrap();
        let sel = Selector::parse(&format!("p[{SEARCH_MARKER_ATTR}]")).unwrap();
        let marked: Vec<_> = cleaned.html.select(&sel).collect();
        assert_eq!(marked.len(), 1);
        assert_eq!(marked[0].value().attr("id"), Some("x"));
        assert_eq!(marked[0].value().attr(SEARCH_MARKER_ATTR), Some("1"));
        let sel_h = Selector::parse(&format!("h2[{SEARCH_MARKER_ATTR}]")).unwrap();
        assert_eq!(cleaned.html.select(&sel_h).count(), 1);
    }

    #[test]
    fn removal_wins_over_replace_and_search() {
        let p = profile(
            r#"{"search":["p"],"remove":["div.gone"],"replace":[{"selector":"p.swap","replacement":"X"}]}"#,
        );
        let html = r#"<div class="gone"><p class="swap">inner</p></div><p class="swap">outer</p>"#;
        let cleaned = clean(html, &p, URL).unwrap();
        assert_eq!(cleaned.text_content(), "X");
    }
}
