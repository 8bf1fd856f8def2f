//! Plain `key = value` documents used for certificates and report summaries.
//!
//! ```text
//! [ping_pong_certificate]
//! u = aab
//! margin2 = 3/2
//! ```
//!
//! One section header, then one entry per line in insertion order. Keys are
//! `[A-Za-z0-9_.]+`; values run to the end of the line and never contain a
//! newline. Rationals are written `p/q`, reals with 12 significant digits.

use std::fmt::{self, Display};

use thiserror::Error;

use crate::{fmt_rational, fmt_real, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KvError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KvDoc {
    kind: String,
    entries: Vec<(String, String)>,
}

fn valid_key(k: &str) -> bool {
    !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

impl KvDoc {
    pub fn new(kind: &str) -> KvDoc {
        assert!(valid_key(kind), "bad section name {kind:?}");
        KvDoc { kind: kind.to_string(), entries: Vec::new() }
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn push(&mut self, key: &str, value: impl Display) {
        assert!(valid_key(key), "bad key {key:?}");
        let value = value.to_string().replace('\n', " ");
        self.entries.push((key.to_string(), value));
    }

    pub fn push_rational(&mut self, key: &str, value: &Rational) {
        self.push(key, fmt_rational(value));
    }

    pub fn push_real(&mut self, key: &str, value: f64) {
        self.push(key, fmt_real(value));
    }

    pub fn push_reals(&mut self, key: &str, values: &[f64]) {
        let s: Vec<String> = values.iter().map(|&x| fmt_real(x)).collect();
        self.push(key, format!("[{}]", s.join(", ")));
    }

    /// Appends every entry of `other` under `prefix.`.
    pub fn extend_prefixed(&mut self, prefix: &str, other: &KvDoc) {
        for (k, v) in &other.entries {
            self.push(&format!("{prefix}.{k}"), v);
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn parse(text: &str) -> Result<KvDoc, KvError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(KvError::Syntax { line: 1, msg: "empty document".into() })?;
        let kind = header
            .trim()
            .strip_prefix('[')
            .and_then(|h| h.strip_suffix(']'))
            .filter(|k| valid_key(k))
            .ok_or(KvError::Syntax { line: 1, msg: "expected [section]".into() })?;
        let mut doc = KvDoc::new(kind);
        for (i, line) in lines {
            let (k, v) = line
                .split_once(" = ")
                .ok_or_else(|| KvError::Syntax { line: i + 1, msg: "expected `key = value`".into() })?;
            if !valid_key(k) {
                return Err(KvError::Syntax { line: i + 1, msg: format!("bad key {k:?}") });
            }
            doc.entries.push((k.to_string(), v.to_string()));
        }
        Ok(doc)
    }
}

impl Display for KvDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}]", self.kind)?;
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn renders_rationals_as_p_over_q() {
        let mut doc = KvDoc::new("t");
        doc.push_rational("half", &Rational::new(3, 2));
        doc.push_rational("whole", &Rational::from(3));
        doc.push_real("x", 0.1);
        assert_eq!(doc.to_string(), "[t]\nhalf = 3/2\nwhole = 3\nx = 1.00000000000e-1\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            KvDoc::parse("[t]\na = 1\nbroken\n"),
            Err(KvError::Syntax { line: 3, msg: "expected `key = value`".into() })
        );
        assert!(KvDoc::parse("t\n").is_err());
    }

    proptest! {
        #[test]
        fn render_parse_roundtrip(entries in proptest::collection::vec(("[a-z_][a-z0-9_.]{0,8}", "[ -~]{0,20}"), 0..8)) {
            let mut doc = KvDoc::new("doc");
            for (k, v) in &entries {
                doc.push(k, v.trim());
            }
            let back = KvDoc::parse(&doc.to_string()).unwrap();
            prop_assert_eq!(back, doc);
        }
    }
}
