//! Mutation detection: a single corruption of one offset, one anchor
//! character, or one chain pointer in a serialized corpus must always be
//! flagged, and unmutated twins must stay clean.

mod common;

use common::{random_document, seeded, GenOptions};
use nif_forge_core::rdf::{serialize, RdfFormat, SerializeOptions};
use nif_forge_core::validator::validate_bytes;
use rand::prelude::*;
use rand::rngs::StdRng;

#[derive(Debug, Clone, Copy, PartialEq)]
enum MutationKind {
    OffsetPlusOne,
    OffsetMinusOne,
    AnchorChar,
    ChainSwap,
}

/// Apply one mutation to the serialized corpus, returning the mutated text
/// and a label, or `None` when the corpus offers no site for this kind.
fn mutate(text: &str, kind: MutationKind, rng: &mut StdRng) -> Option<(String, String)> {
    let lines: Vec<&str> = text.lines().collect();
    match kind {
        MutationKind::OffsetPlusOne | MutationKind::OffsetMinusOne => {
            let sites: Vec<usize> = lines
                .iter()
                .enumerate()
                .filter(|(_, l)| l.contains("#beginIndex>") || l.contains("#endIndex>"))
                .map(|(i, _)| i)
                .collect();
            let line_idx = *sites.choose(rng)?;
            let line = lines[line_idx];
            let q1 = line.find('"')?;
            let q2 = q1 + 1 + line[q1 + 1..].find('"')?;
            let value: i64 = line[q1 + 1..q2].parse().ok()?;
            let new_value = match kind {
                MutationKind::OffsetPlusOne => value + 1,
                _ => value - 1,
            };
            if new_value < 0 {
                return None; // would not parse as an offset mutation
            }
            let mutated = format!("{}\"{}\"{}", &line[..q1], new_value, &line[q2 + 1..]);
            let mut out: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
            out[line_idx] = mutated;
            Some((
                out.join("\n") + "\n",
                format!("offset {value}->{new_value}"),
            ))
        }
        MutationKind::AnchorChar => {
            let sites: Vec<usize> = lines
                .iter()
                .enumerate()
                .filter(|(_, l)| l.contains("#anchorOf>"))
                .map(|(i, _)| i)
                .collect();
            let line_idx = *sites.choose(rng)?;
            let line = lines[line_idx];
            let q1 = line.find('"')?;
            let q2 = q1 + 1 + line[q1 + 1..].find('"')?;
            let body = &line[q1 + 1..q2];
            // Pick an unescaped alphanumeric char and replace it with a
            // different letter.
            let pos = body.char_indices().find(|(_, c)| c.is_alphanumeric())?.0;
            let old = body[pos..].chars().next().unwrap();
            let replacement = if old == 'Q' { 'J' } else { 'Q' };
            let mut new_body = String::new();
            new_body.push_str(&body[..pos]);
            new_body.push(replacement);
            new_body.push_str(&body[pos + old.len_utf8()..]);
            let mutated = format!("{}\"{}\"{}", &line[..q1], new_body, &line[q2 + 1..]);
            let mut out: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
            out[line_idx] = mutated;
            Some((
                out.join("\n") + "\n",
                format!("anchor {old}->{replacement}"),
            ))
        }
        MutationKind::ChainSwap => {
            // Swap the objects of two chain-pointer lines with the same
            // predicate, or retarget one pointer when only one exists.
            let preds = [
                "#nextParagraph>",
                "#nextSection>",
                "#firstParagraph>",
                "#lastParagraph>",
                "#firstSection>",
                "#lastSection>",
            ];
            let mut by_pred: Vec<(usize, usize)> = Vec::new(); // (pred idx, line idx)
            for (i, l) in lines.iter().enumerate() {
                for (pi, p) in preds.iter().enumerate() {
                    if l.contains(p) {
                        by_pred.push((pi, i));
                    }
                }
            }
            let object_of = |line: &str| -> Option<String> {
                let at = line.rfind(" <")?;
                let end = line[at + 2..].find('>')?;
                Some(line[at + 2..at + 2 + end].to_string())
            };
            // Prefer swapping two same-predicate pointers with distinct
            // objects.
            let mut rng_order = by_pred.clone();
            rng_order.shuffle(rng);
            for (pi, i) in &rng_order {
                for (pj, j) in &by_pred {
                    if pi == pj && i != j {
                        let oi = object_of(lines[*i])?;
                        let oj = object_of(lines[*j])?;
                        if oi == oj {
                            continue;
                        }
                        let mut out: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
                        out[*i] = rebuild_object(lines[*i], &oj)?;
                        out[*j] = rebuild_object(lines[*j], &oi)?;
                        return Some((out.join("\n") + "\n", "chain swap".to_string()));
                    }
                }
            }
            // Fall back: retarget a single pointer at the context URI (a
            // node that can never be its chain target).
            let (_, i) = *rng_order.first()?;
            let ctx = lines.iter().find(|l| l.contains("&nif=context>"))?;
            let ctx_uri = ctx[1..].split('>').next()?.to_string();
            let old = object_of(lines[i])?;
            if old == ctx_uri {
                return None;
            }
            let mut out: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
            out[i] = rebuild_object(lines[i], &ctx_uri)?;
            Some((out.join("\n") + "\n", "chain retarget".to_string()))
        }
    }
}

/// Replace the object IRI (the final `<...>` before the terminating dot).
fn rebuild_object(line: &str, new_object: &str) -> Option<String> {
    let at = line.rfind(" <")?;
    let end = at + 2 + line[at + 2..].find('>')?;
    Some(format!(
        "{} <{}>{}",
        &line[..at],
        new_object,
        &line[end + 1..]
    ))
}

#[test]
fn two_hundred_single_mutations_are_all_detected() {
    let mut rng = seeded(7777);
    let kinds = [
        MutationKind::OffsetPlusOne,
        MutationKind::OffsetMinusOne,
        MutationKind::AnchorChar,
        MutationKind::ChainSwap,
    ];
    let mut detected = 0;
    let mut produced = 0;
    while produced < 200 {
        let doc = random_document(&mut rng, &GenOptions::default());
        let mut buf = Vec::new();
        serialize(
            &doc,
            RdfFormat::NTriples,
            &mut buf,
            SerializeOptions::default(),
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();

        // Unmutated twin stays clean.
        let clean = validate_bytes(text.as_bytes(), "twin").unwrap();
        assert!(
            clean.passed(),
            "false positives on unmutated twin: {:?}",
            clean.violations
        );

        let kind = kinds[produced % kinds.len()];
        let Some((mutated, label)) = mutate(&text, kind, &mut rng) else {
            continue; // no site for this mutation in this document
        };
        produced += 1;
        let report = validate_bytes(mutated.as_bytes(), "mutated").unwrap();
        assert!(
            !report.passed(),
            "undetected {kind:?} ({label}) in {}\n{}",
            doc.meta.title,
            mutated
        );
        detected += 1;
    }
    assert_eq!(detected, 200);
}
