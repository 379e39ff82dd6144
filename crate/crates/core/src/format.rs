//! File formats: the line-based instance file and the JSON matching
//! document.
//!
//! An instance file reads
//!
//! ```text
//! HCG3 1
//! n 12
//! # any number of comment lines, anywhere after the first line
//! 1121...   (colour digits in colex order, wrapped at 80 columns)
//! ```

use serde::{Deserialize, Serialize};

use crate::colour::Colour;
use crate::colouring::Colouring;
use crate::error::{Error, Result};
use crate::matching::Matching;
use crate::triple::{binomial, Triple};
use crate::vset::MAX_VERTICES;

pub const FORMAT_NAME: &str = "HCG3";
pub const FORMAT_VERSION: u32 = 1;
pub const WRAP: usize = 80;

/// A comment line and the number of non-comment lines before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comment {
    pub after: usize,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub colouring: Colouring,
    pub comments: Vec<Comment>,
}

impl InstanceFile {
    pub fn new(colouring: Colouring) -> InstanceFile {
        InstanceFile { colouring, comments: Vec::new() }
    }

    /// Adds a comment line directly below the header.
    pub fn with_comment(mut self, text: impl Into<String>) -> InstanceFile {
        let text = text.into();
        let text = if text.starts_with('#') { text } else { format!("# {text}") };
        self.comments.push(Comment { after: 2, text });
        self
    }

    pub fn n(&self) -> usize {
        self.colouring.n()
    }

    pub fn parse(text: &str) -> Result<InstanceFile> {
        let mut comments = Vec::new();
        let mut body: Vec<&str> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.starts_with('#') {
                if idx == 0 {
                    return Err(Error::Parse(format!("line 1 must be `{FORMAT_NAME} {FORMAT_VERSION}`")));
                }
                comments.push(Comment { after: body.len(), text: line.to_string() });
            } else {
                body.push(line);
            }
        }
        let header = body.first().ok_or_else(|| Error::Parse("empty instance file".into()))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some(FORMAT_NAME) {
            return Err(Error::Parse(format!("line 1 must start with `{FORMAT_NAME}`")));
        }
        let version: u32 = parts
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse("missing format version".into()))?;
        if version != FORMAT_VERSION || parts.next().is_some() {
            return Err(Error::Parse(format!("unsupported header `{header}`")));
        }
        let n_line = body.get(1).ok_or_else(|| Error::Parse("missing `n` line".into()))?;
        let n: usize = match n_line.split_whitespace().collect::<Vec<_>>()[..] {
            ["n", v] => v.parse().map_err(|_| Error::Parse(format!("bad vertex count `{v}`")))?,
            _ => return Err(Error::Parse(format!("expected `n <N>`, got `{n_line}`"))),
        };
        if n > MAX_VERTICES {
            return Err(Error::Parse(format!("n = {n} exceeds {MAX_VERTICES}")));
        }
        let digits: String = body[2..].iter().map(|l| l.trim_end()).collect();
        let expected = binomial(n, 3);
        if digits.len() != expected {
            return Err(Error::Parse(format!(
                "expected {expected} colour digits for n = {n}, found {}",
                digits.len()
            )));
        }
        Ok(InstanceFile { colouring: Colouring::from_digits(n, &digits)?, comments })
    }

    /// Canonical text: header, `n` line, digits wrapped at 80 columns, with
    /// comments restored at their recorded positions.
    pub fn serialize(&self) -> String {
        let mut body = vec![format!("{FORMAT_NAME} {FORMAT_VERSION}"), format!("n {}", self.n())];
        let digits = self.colouring.to_digits();
        body.extend(digits.as_bytes().chunks(WRAP).map(|ch| String::from_utf8_lossy(ch).into_owned()));
        let mut out = String::new();
        let mut pending = self.comments.iter().peekable();
        for (i, line) in body.iter().enumerate() {
            while let Some(c) = pending.next_if(|c| c.after <= i) {
                out.push_str(&c.text);
                out.push('\n');
            }
            out.push_str(line);
            out.push('\n');
        }
        for c in pending {
            out.push_str(&c.text);
            out.push('\n');
        }
        out
    }
}

/// Where a matching document came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Solve,
    Oracle,
}

/// JSON record of a matching for a given instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingDocument {
    pub n: usize,
    /// Colours the triples use.
    pub colours: Vec<Colour>,
    pub triples: Vec<Triple>,
    pub size: usize,
    pub avoided: Option<Colour>,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
}

impl MatchingDocument {
    pub fn new(c: &Colouring, m: &Matching, source: Source) -> MatchingDocument {
        MatchingDocument {
            n: c.n(),
            colours: m.colours_used(c).to_vec(),
            triples: m.triples.clone(),
            size: m.len(),
            avoided: m.avoided,
            source,
            trace: None,
            exact: None,
        }
    }

    pub fn matching(&self) -> Matching {
        Matching { triples: self.triples.clone(), avoided: self.avoided }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_json(text: &str) -> Result<MatchingDocument> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matching document: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::random_colouring;

    #[test]
    fn round_trip_is_byte_identical() {
        let c = random_colouring(12, 7, [1.0, 1.0, 1.0]).unwrap();
        let f = InstanceFile::new(c).with_comment("random n=12 seed=7");
        let text = f.serialize();
        assert!(text.starts_with("HCG3 1\nn 12\n# random n=12 seed=7\n"));
        assert!(text.lines().skip(3).all(|l| l.len() <= WRAP));
        let back = InstanceFile::parse(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.serialize(), text);
    }

    #[test]
    fn comments_anywhere_survive() {
        let c = Colouring::constant(9, Colour::TWO).unwrap();
        let digits = c.to_digits();
        let text = format!("HCG3 1\n# a\nn 9\n{}\n# mid\n{}\n# end\n", &digits[..80], &digits[80..]);
        let f = InstanceFile::parse(&text).unwrap();
        assert_eq!(f.comments.len(), 3);
        assert_eq!(f.serialize(), text);
    }

    #[test]
    fn malformed_files() {
        assert!(InstanceFile::parse("").is_err());
        assert!(InstanceFile::parse("HCG3 2\nn 3\n1\n").is_err());
        assert!(InstanceFile::parse("HCG3 1\nn 4\n111\n").is_err());
        assert!(InstanceFile::parse("HCG3 1\nn 3\n4\n").is_err());
        assert!(InstanceFile::parse("HCG3 1\nm 3\n1\n").is_err());
        assert!(InstanceFile::parse("# x\nHCG3 1\nn 3\n1\n").is_err());
        assert!(InstanceFile::parse("HCG3 1\nn 3\n1\n").is_ok());
    }

    #[test]
    fn document_json() {
        let c = Colouring::constant(6, Colour::ONE).unwrap();
        let m = Matching::avoiding(vec![Triple::new(0, 1, 2), Triple::new(3, 4, 5)], Colour::TWO);
        let d = MatchingDocument::new(&c, &m, Source::Solve);
        let back = MatchingDocument::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.matching(), m);
        assert!(d.to_json().contains("\"source\": \"solve\""));
    }
}
