use std::collections::BTreeMap;

use super::QuestionError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Segment {
    Literal(String),
    Slot(String),
}

/// A `${slot}` string template. `$$` renders a literal dollar sign; any
/// other use of `$` is rejected at parse time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    source: String,
    segments: Vec<Segment>,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl Template {
    pub fn parse(pattern: &str) -> Result<Self, QuestionError> {
        let bad = |offset: usize, reason: &str| QuestionError::Template {
            pattern: pattern.to_string(),
            offset,
            reason: reason.to_string(),
        };
        let mut segments = Vec::new();
        let mut literal = String::new();
        let mut chars = pattern.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            if c != '$' {
                literal.push(c);
                continue;
            }
            match chars.next() {
                Some((_, '$')) => literal.push('$'),
                Some((_, '{')) => {
                    let mut name = String::new();
                    loop {
                        match chars.next() {
                            Some((_, '}')) => break,
                            Some((_, ch)) if is_ident(ch) && (!name.is_empty() || is_ident_start(ch)) => {
                                name.push(ch)
                            }
                            Some((j, _)) => return Err(bad(j, "invalid character in slot name")),
                            None => return Err(bad(i, "unterminated slot")),
                        }
                    }
                    if name.is_empty() {
                        return Err(bad(i, "empty slot name"));
                    }
                    if !literal.is_empty() {
                        segments.push(Segment::Literal(std::mem::take(&mut literal)));
                    }
                    segments.push(Segment::Slot(name));
                }
                _ => return Err(bad(i, "lone '$'; use '$$' or '${name}'")),
            }
        }
        if !literal.is_empty() {
            segments.push(Segment::Literal(literal));
        }
        Ok(Template {
            source: pattern.to_string(),
            segments,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn slots(&self) -> impl Iterator<Item = &str> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Slot(n) => Some(n.as_str()),
            Segment::Literal(_) => None,
        })
    }

    /// Renders with every slot bound; an unbound slot is an error.
    pub fn render(&self, values: &BTreeMap<String, String>) -> Result<String, QuestionError> {
        let mut out = String::with_capacity(self.source.len());
        for seg in &self.segments {
            match seg {
                Segment::Literal(s) => out.push_str(s),
                Segment::Slot(name) => out.push_str(
                    values
                        .get(name)
                        .ok_or_else(|| QuestionError::UnboundSlot(name.clone()))?,
                ),
            }
        }
        Ok(out)
    }
}

/// Convenience for one-off rendering from string pairs.
pub fn render_pairs(pattern: &str, pairs: &[(&str, String)]) -> Result<String, QuestionError> {
    let values = pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect();
    Template::parse(pattern)?.render(&values)
}
