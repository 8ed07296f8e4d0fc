//! Triple values and N-Triples escaping.

use std::fmt;

/// An RDF object term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Object {
    Iri(String),
    Literal {
        lexical: String,
        /// Datatype IRI, absent for plain literals.
        datatype: Option<String>,
        /// Language tag, mutually exclusive with `datatype`.
        lang: Option<String>,
    },
}

impl Object {
    pub fn iri(value: impl Into<String>) -> Object {
        Object::Iri(value.into())
    }

    pub fn typed(lexical: impl Into<String>, datatype: &str) -> Object {
        Object::Literal {
            lexical: lexical.into(),
            datatype: Some(datatype.to_string()),
            lang: None,
        }
    }

    pub fn plain(lexical: impl Into<String>) -> Object {
        Object::Literal {
            lexical: lexical.into(),
            datatype: None,
            lang: None,
        }
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Object::Iri(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_lexical(&self) -> Option<&str> {
        match self {
            Object::Literal { lexical, .. } => Some(lexical),
            _ => None,
        }
    }
}

/// One triple with absolute-URI subject and predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub subject: String,
    pub predicate: String,
    pub object: Object,
}

impl Triple {
    pub fn new(subject: impl Into<String>, predicate: &str, object: Object) -> Triple {
        Triple {
            subject: subject.into(),
            predicate: predicate.to_string(),
            object,
        }
    }
}

impl fmt::Display for Triple {
    /// Formats as one N-Triples line (without the newline).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}> <{}> ", self.subject, self.predicate)?;
        match &self.object {
            Object::Iri(iri) => write!(f, "<{iri}>")?,
            Object::Literal {
                lexical,
                datatype,
                lang,
            } => {
                write!(f, "\"{}\"", escape_literal(lexical))?;
                if let Some(dt) = datatype {
                    write!(f, "^^<{dt}>")?;
                } else if let Some(l) = lang {
                    write!(f, "@{l}")?;
                }
            }
        }
        write!(f, " .")
    }
}

/// Escape a literal's lexical form per N-Triples rules: backslash, quote,
/// newline, carriage return and tab get dedicated escapes, remaining C0
/// controls become `\u00XX`, everything else passes through as UTF-8.
pub fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Reverse of [`escape_literal`], accepting the full N-Triples escape set.
pub fn unescape_literal(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(ch) = chars.next() {
        if ch != '\\' {
            out.push(ch);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('b') => out.push('\u{8}'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('f') => out.push('\u{c}'),
            Some('"') => out.push('"'),
            Some('\'') => out.push('\''),
            Some('\\') => out.push('\\'),
            Some('u') => out.push(read_hex(&mut chars, 4)?),
            Some('U') => out.push(read_hex(&mut chars, 8)?),
            Some(other) => return Err(format!("invalid escape \\{other}")),
            None => return Err("dangling backslash".to_string()),
        }
    }
    Ok(out)
}

fn read_hex(chars: &mut std::str::Chars<'_>, n: usize) -> Result<char, String> {
    let mut value: u32 = 0;
    for _ in 0..n {
        let c = chars.next().ok_or("truncated \\u escape")?;
        let digit = c.to_digit(16).ok_or(format!("invalid hex digit {c:?}"))?;
        value = value * 16 + digit;
    }
    char::from_u32(value).ok_or(format!("\\u{value:X} is not a scalar value"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escaping_round_trips() {
        let cases = [
            "plain",
            "with \"quotes\" and \\backslash\\",
            "tab\there\nnewline",
            "control\u{1}char",
            "caf\u{e9} \u{1F384}",
        ];
        for case in cases {
            assert_eq!(unescape_literal(&escape_literal(case)).unwrap(), case);
        }
    }

    #[test]
    fn ntriples_line_format() {
        let t = Triple::new(
            "http://example.org/s",
            "http://example.org/p",
            Object::typed(
                "7913",
                "http://www.w3.org/2001/XMLSchema#nonNegativeInteger",
            ),
        );
        assert_eq!(
            t.to_string(),
            "<http://example.org/s> <http://example.org/p> \"7913\"^^<http://www.w3.org/2001/XMLSchema#nonNegativeInteger> ."
        );
    }

    #[test]
    fn bad_escapes_are_rejected() {
        assert!(unescape_literal("\\q").is_err());
        assert!(unescape_literal("\\u12").is_err());
        assert!(unescape_literal("trailing\\").is_err());
    }
}
