//! POS-sequence patterns.
//!
//! A pattern is a sequence of groups, each a set of tags with a quantifier,
//! written like a tiny regular expression: `(JJ)*(NN|NNS|NNP)+`. Matching is
//! leftmost-longest over a slice of tags.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::Pos;
use crate::error::Error;

pub const DEFAULT_PATTERN: &str = "(JJ)*(NN|NNS|NNP)+";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantifier {
    One,
    Optional,
    Star,
    Plus,
}

impl Quantifier {
    fn bounds(self) -> (usize, usize) {
        match self {
            Quantifier::One => (1, 1),
            Quantifier::Optional => (0, 1),
            Quantifier::Star => (0, usize::MAX),
            Quantifier::Plus => (1, usize::MAX),
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Quantifier::One => "",
            Quantifier::Optional => "?",
            Quantifier::Star => "*",
            Quantifier::Plus => "+",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Group {
    tags: Vec<Pos>,
    quantifier: Quantifier,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosPattern {
    groups: Vec<Group>,
}

impl Default for PosPattern {
    fn default() -> Self {
        DEFAULT_PATTERN.parse().expect("default pattern is valid")
    }
}

impl FromStr for PosPattern {
    type Err = Error;

    fn from_str(src: &str) -> Result<Self, Error> {
        let fail = |message: &str| Error::Pattern {
            pattern: src.to_string(),
            message: message.to_string(),
        };
        let mut groups = Vec::new();
        let mut chars = src.chars().peekable();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
                continue;
            }
            let body: String = if c == '(' {
                chars.next();
                let mut body = String::new();
                loop {
                    match chars.next() {
                        Some(')') => break,
                        Some(ch) => body.push(ch),
                        None => return Err(fail("unclosed `(`")),
                    }
                }
                body
            } else if c.is_ascii_alphabetic() {
                let mut body = String::new();
                while let Some(&ch) = chars.peek() {
                    if !ch.is_ascii_alphabetic() {
                        break;
                    }
                    body.push(ch);
                    chars.next();
                }
                body
            } else {
                return Err(fail(&format!("unexpected character `{c}`")));
            };
            let mut tags = Vec::new();
            for name in body.split('|').map(str::trim) {
                let tag = Pos::from_tag_name(name)
                    .ok_or_else(|| fail(&format!("unknown tag `{name}`")))?;
                if !tags.contains(&tag) {
                    tags.push(tag);
                }
            }
            let quantifier = match chars.peek() {
                Some('*') => Quantifier::Star,
                Some('+') => Quantifier::Plus,
                Some('?') => Quantifier::Optional,
                _ => Quantifier::One,
            };
            if quantifier != Quantifier::One {
                chars.next();
            }
            groups.push(Group { tags, quantifier });
        }

        let last = groups.last().ok_or_else(|| fail("empty pattern"))?;
        if !matches!(last.quantifier, Quantifier::One | Quantifier::Plus)
            || !last.tags.iter().all(|t| t.is_noun())
        {
            return Err(fail("pattern must end in a required noun group"));
        }
        Ok(PosPattern { groups })
    }
}

impl fmt::Display for PosPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.groups {
            let names: Vec<_> = g.tags.iter().map(|t| t.as_str()).collect();
            write!(f, "({}){}", names.join("|"), g.quantifier.symbol())?;
        }
        Ok(())
    }
}

impl PosPattern {
    /// Every prefix length of `tags` the pattern can match in full.
    fn match_lengths(groups: &[Group], tags: &[Pos], offset: usize, out: &mut BTreeSet<usize>) {
        let Some((group, rest)) = groups.split_first() else {
            out.insert(offset);
            return;
        };
        let (min, max) = group.quantifier.bounds();
        let run = tags[offset..]
            .iter()
            .take_while(|t| group.tags.contains(t))
            .count();
        for n in min..=run.min(max) {
            Self::match_lengths(rest, tags, offset + n, out);
        }
    }

    /// Length of the longest non-empty match anchored at the start of `tags`.
    pub fn longest_prefix(&self, tags: &[Pos]) -> Option<usize> {
        let mut ends = BTreeSet::new();
        Self::match_lengths(&self.groups, tags, 0, &mut ends);
        ends.into_iter().next_back().filter(|&n| n > 0)
    }

    /// Whether the whole of `tags` matches.
    pub fn matches(&self, tags: &[Pos]) -> bool {
        let mut ends = BTreeSet::new();
        Self::match_lengths(&self.groups, tags, 0, &mut ends);
        ends.contains(&tags.len())
    }
}
