//! Property tests over randomized inputs.

mod common;

use nif_forge_core::cleaner::clean;
use nif_forge_core::enricher::{enrich, ExclusionList};
use nif_forge_core::extractor::extract;
use nif_forge_core::model::{classify_link, mint_uri, ArticleMeta, LinkKind, Unit};
use nif_forge_core::profile::CleaningProfile;
use nif_forge_core::rdf::triple::{escape_literal, unescape_literal};
use nif_forge_core::stats::{fleiss_kappa, percent_new, JudgmentMatrix};
use nif_forge_core::text::{cp_len, Span};
use nif_forge_core::validator::{check_document, sanitize_unicode};
use proptest::prelude::*;

const URL: &str = "https://en.wikipedia.org/wiki/Property";

fn test_profile() -> CleaningProfile {
    CleaningProfile::from_json(
        r#"{
            "search": ["h2", "h3", "h4", "p"],
            "remove": ["table.infobox", ".navbox"],
            "replace": [{"selector": "br", "replacement": "\n"}]
        }"#,
    )
    .unwrap()
}

/// Random wiki-ish HTML: headings, paragraphs with inline markup and links,
/// removable clutter, line breaks.
fn arb_html() -> impl Strategy<Value = String> {
    let word = prop::sample::select(vec![
        "alpha",
        "bridge",
        "east",
        "berlin",
        "river",
        "caf\u{e9}",
        "\u{5317}\u{4eac}",
        "delta",
    ]);
    let inline = prop_oneof![
        word.clone().prop_map(|w| format!("{w} ")),
        word.clone().prop_map(|w| format!("<b>{w}</b> ")),
        word.clone()
            .prop_map(|w| format!("<a href=\"/wiki/{w}\">{w}</a> ")),
        word.clone()
            .prop_map(|w| format!("<a href=\"#note\">{w}</a> ")),
        Just("<br>".to_string()),
        Just("  \n ".to_string()),
    ];
    let paragraph =
        prop::collection::vec(inline, 1..10).prop_map(|parts| format!("<p>{}</p>", parts.concat()));
    let block = prop_oneof![
        4 => paragraph,
        1 => word.clone().prop_map(|w| format!("<h2>{w}</h2>")),
        1 => word.clone().prop_map(|w| format!("<h3>{w}</h3>")),
        1 => word.prop_map(|w| format!("<table class=\"infobox\"><tr><td>{w}</td></tr></table>")),
    ];
    prop::collection::vec(block, 1..8).prop_map(|blocks| blocks.concat())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Cleaning a serialized cleaned tree changes nothing textually.
    #[test]
    fn cleaning_is_idempotent(html in arb_html()) {
        let profile = test_profile();
        let once = clean(&html, &profile, URL).unwrap();
        let again = clean(&once.to_html(), &profile, URL).unwrap();
        prop_assert_eq!(once.text_content(), again.text_content());
    }

    /// Cleaning never grows the text beyond the inserted replacements.
    #[test]
    fn cleaning_is_monotone(html in arb_html()) {
        let profile = test_profile();
        let input_len = {
            let identity = CleaningProfile::empty("*");
            clean(&html, &identity, URL).unwrap().text_content().chars().count()
        };
        let cleaned = clean(&html, &profile, URL).unwrap();
        let replacements = html.matches("<br").count(); // replacement "\n" is 1 cp
        prop_assert!(cleaned.text_content().chars().count() <= input_len + replacements);
    }

    /// The surviving node set does not depend on remove-selector order.
    #[test]
    fn remove_order_does_not_matter(html in arb_html()) {
        let a = CleaningProfile::from_json(
            r#"{"remove": ["table.infobox", "b", ".navbox"]}"#,
        ).unwrap();
        let b = CleaningProfile::from_json(
            r#"{"remove": [".navbox", "table.infobox", "b"]}"#,
        ).unwrap();
        let ca = clean(&html, &a, URL).unwrap();
        let cb = clean(&html, &b, URL).unwrap();
        prop_assert_eq!(ca.to_html(), cb.to_html());
    }

    /// Extraction output always satisfies the offset and structure battery,
    /// before and after enrichment.
    #[test]
    fn extraction_and_enrichment_are_sound(html in arb_html()) {
        let profile = test_profile();
        let meta = ArticleMeta::new("Property", "en", "2016-10").unwrap();
        let cleaned = clean(&html, &profile, URL).unwrap();
        let doc = extract(&cleaned, &meta).unwrap();
        prop_assert_eq!(check_document(&doc), vec![]);
        let (enriched, _) = enrich(&doc, &ExclusionList::default()).unwrap();
        prop_assert_eq!(check_document(&enriched), vec![]);
        // End-exclusivity on every link span.
        for link in enriched.walk_links() {
            prop_assert_eq!(link.span.len(), cp_len(&link.anchor));
        }
    }

    /// Minting is deterministic and injective over distinct spans and over
    /// distinct units sharing a span (except Section/Link, which share the
    /// published bare char= scheme).
    #[test]
    fn mint_uri_injective(b1 in 0usize..5000, l1 in 0usize..50, b2 in 0usize..5000, l2 in 0usize..50) {
        let meta = ArticleMeta::new("Inject", "en", "2016-10").unwrap();
        let s1 = Span::new(b1, b1 + l1);
        let s2 = Span::new(b2, b2 + l2);
        let units = |s: Span| [
            Unit::Section(s),
            Unit::Paragraph(s),
            Unit::Title(s),
            Unit::Link(s),
        ];
        for u in units(s1) {
            prop_assert_eq!(mint_uri(&meta, u).unwrap(), mint_uri(&meta, u).unwrap());
        }
        if s1 != s2 {
            for ua in units(s1) {
                for ub in units(s2) {
                    prop_assert_ne!(mint_uri(&meta, ua).unwrap(), mint_uri(&meta, ub).unwrap());
                }
            }
        }
        // Distinct units, same span: all distinct except Section vs Link.
        let minted: Vec<String> = units(s1)
            .iter()
            .map(|u| mint_uri(&meta, *u).unwrap())
            .collect();
        prop_assert_ne!(&minted[0], &minted[1]);
        prop_assert_ne!(&minted[0], &minted[2]);
        prop_assert_ne!(&minted[1], &minted[2]);
        prop_assert_ne!(&minted[1], &minted[3]);
        prop_assert_ne!(&minted[2], &minted[3]);
        prop_assert_eq!(&minted[0], &minted[3]); // the published collision
    }

    /// Any two whitespace-joined tokens classify as a phrase.
    #[test]
    fn two_tokens_are_a_phrase(a in "[a-z\u{e0}-\u{ff}]{1,8}", b in "[a-z\u{e0}-\u{ff}]{1,8}") {
        prop_assert_eq!(classify_link(&format!("{a} {b}")).unwrap(), LinkKind::Phrase);
        prop_assert_eq!(classify_link(&a).unwrap(), LinkKind::Word);
    }

    /// percent_new is scale-invariant and zero at equality.
    #[test]
    fn percent_new_properties(b in 1u64..100_000, extra in 0u64..100_000, k in 1u64..50) {
        let a = b + extra;
        prop_assert_eq!(percent_new(b, b).unwrap(), 0.0);
        let plain = percent_new(b, a).unwrap();
        let scaled = percent_new(k * b, k * a).unwrap();
        prop_assert!((plain - scaled).abs() < 1e-9);
    }

    /// Fleiss' kappa is at most 1, equals 1 iff every row is unanimous, and
    /// is invariant under item and category permutations.
    #[test]
    fn fleiss_kappa_properties(
        rows in prop::collection::vec(prop::collection::vec(0u64..4, 3), 2..8),
        seed in 0u64..1000,
    ) {
        // Normalize rows to a fixed rater count of 6.
        let rows: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|mut r| {
                let total: u64 = r.iter().sum();
                // Scale and pad the first category to reach 6.
                let mut acc: u64 = 0;
                for c in r.iter_mut() {
                    *c = (*c * 6).checked_div(total).unwrap_or(0);
                    acc += *c;
                }
                r[0] += 6 - acc;
                r
            })
            .collect();
        let m = JudgmentMatrix::new(rows.clone()).unwrap();
        let kappa = fleiss_kappa(&m);
        prop_assert!(kappa <= 1.0 + 1e-12);
        let unanimous = rows.iter().all(|r| r.contains(&6));
        if unanimous {
            prop_assert!((kappa - 1.0).abs() < 1e-12);
        } else {
            prop_assert!(kappa < 1.0);
        }

        // Permutation invariance.
        use rand::prelude::*;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut shuffled = rows.clone();
        shuffled.shuffle(&mut rng);
        let mut order: Vec<usize> = (0..3).collect();
        order.shuffle(&mut rng);
        let permuted: Vec<Vec<u64>> = shuffled
            .into_iter()
            .map(|r| order.iter().map(|&j| r[j]).collect())
            .collect();
        let m2 = JudgmentMatrix::new(permuted).unwrap();
        prop_assert!((fleiss_kappa(&m2) - kappa).abs() < 1e-9);
    }

    /// Sanitizing is idempotent and the second pass drops nothing.
    #[test]
    fn sanitize_unicode_idempotent(bytes in prop::collection::vec(any::<u8>(), 0..512)) {
        let (clean, _) = sanitize_unicode(&bytes);
        let (again, dropped) = sanitize_unicode(clean.as_bytes());
        prop_assert_eq!(again, clean);
        prop_assert_eq!(dropped, 0);
    }

    /// Literal escaping round-trips arbitrary strings.
    #[test]
    fn literal_escaping_round_trips(s in "\\PC*") {
        prop_assert_eq!(unescape_literal(&escape_literal(&s)).unwrap(), s);
    }
}
