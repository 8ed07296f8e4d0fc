//! Code-point offset arithmetic.
//!
//! All spans in the corpus count Unicode code points of the context string,
//! begin inclusive, end exclusive. Rust strings are byte-indexed, so this
//! module carries the conversions in one place.

use std::fmt;

/// A half-open code-point span: begin inclusive, end exclusive.
///
/// This is plain data. `begin > end` is representable on purpose: the
/// validator must be able to hold spans read from a corrupted corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub begin: usize,
    pub end: usize,
}

impl Span {
    pub fn new(begin: usize, end: usize) -> Self {
        Span { begin, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.begin)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.begin
    }

    /// True when `other` lies entirely inside `self`.
    pub fn contains(&self, other: &Span) -> bool {
        self.begin <= other.begin && other.end <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.begin < other.end && other.begin < self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.begin, self.end)
    }
}

/// Number of code points in `s`.
pub fn cp_len(s: &str) -> usize {
    s.chars().count()
}

/// Byte-boundary table for O(log n) byte→code-point and O(1)
/// code-point→byte lookups on one string.
pub struct OffsetMap {
    /// `byte_of[i]` is the byte index where the `i`-th code point starts;
    /// the final entry is the string's byte length.
    byte_of: Vec<usize>,
}

impl OffsetMap {
    pub fn new(text: &str) -> Self {
        let mut byte_of: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
        byte_of.push(text.len());
        OffsetMap { byte_of }
    }

    pub fn cp_len(&self) -> usize {
        self.byte_of.len() - 1
    }

    /// Code-point index of the char starting at byte `b`. `b` must be a char
    /// boundary.
    pub fn byte_to_cp(&self, b: usize) -> usize {
        match self.byte_of.binary_search(&b) {
            Ok(i) => i,
            Err(i) => i, // not a boundary; nearest following char
        }
    }

    pub fn cp_to_byte(&self, cp: usize) -> Option<usize> {
        self.byte_of.get(cp).copied()
    }

    /// The substring covered by `span`, or `None` when the span exceeds the
    /// text bounds or is inverted.
    pub fn slice<'a>(&self, text: &'a str, span: Span) -> Option<&'a str> {
        if span.begin > span.end || span.end > self.cp_len() {
            return None;
        }
        let b = self.cp_to_byte(span.begin)?;
        let e = self.cp_to_byte(span.end)?;
        Some(&text[b..e])
    }

    /// Code point immediately before `cp`, if any.
    pub fn char_before(&self, text: &str, cp: usize) -> Option<char> {
        if cp == 0 || cp > self.cp_len() {
            return None;
        }
        let b = self.cp_to_byte(cp)?;
        text[..b].chars().next_back()
    }

    /// Code point at `cp`, if any.
    pub fn char_at(&self, text: &str, cp: usize) -> Option<char> {
        if cp >= self.cp_len() {
            return None;
        }
        let b = self.cp_to_byte(cp)?;
        text[b..].chars().next()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_basics() {
        let s = Span::new(7913, 7920);
        assert_eq!(s.len(), 7);
        assert!(!s.is_empty());
        assert!(s.contains(&Span::new(7913, 7915)));
        assert!(!s.contains(&Span::new(7912, 7915)));
        assert!(s.overlaps(&Span::new(7919, 7925)));
        assert!(!s.overlaps(&Span::new(7920, 7925)));
        assert_eq!(s.to_string(), "7913,7920");
    }

    #[test]
    fn offsets_count_code_points_not_bytes() {
        let text = "Caf\u{e9} \u{1F384} x";
        let map = OffsetMap::new(text);
        assert_eq!(map.cp_len(), 8);
        assert_eq!(map.slice(text, Span::new(0, 4)), Some("Caf\u{e9}"));
        assert_eq!(map.slice(text, Span::new(5, 6)), Some("\u{1F384}"));
        assert_eq!(map.char_before(text, 5), Some(' '));
        assert_eq!(map.char_at(text, 7), Some('x'));
        assert_eq!(map.slice(text, Span::new(0, 9)), None);
        assert_eq!(map.slice(text, Span::new(4, 2)), None);
    }

    #[test]
    fn byte_to_cp_round_trips() {
        let text = "a\u{e9}\u{1F384}b";
        let map = OffsetMap::new(text);
        for (cp, (b, _)) in text.char_indices().enumerate() {
            assert_eq!(map.byte_to_cp(b), cp);
            assert_eq!(map.cp_to_byte(cp), Some(b));
        }
        assert_eq!(map.cp_to_byte(map.cp_len()), Some(text.len()));
    }
}
