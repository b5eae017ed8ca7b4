//! Vertex labels.
//!
//! Plain vertices carry an opaque token. Vertices of categorical products
//! carry the tuple of their factor labels and print as `(a,b)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::LabelError;

/// Label of a vertex.
///
/// Ordering is total: atoms sort lexicographically and before tuples, tuples
/// sort componentwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexLabel {
    Atom(Arc<str>),
    Tuple(Arc<[VertexLabel]>),
}

impl VertexLabel {
    /// Builds an atomic label. Tokens must be nonempty and may not contain
    /// whitespace, `#`, parentheses, commas or `;`.
    pub fn atom(token: &str) -> Result<Self, LabelError> {
        if token.is_empty() {
            return Err(LabelError::Empty);
        }
        if let Some(c) = token
            .chars()
            .find(|c| c.is_whitespace() || matches!(c, '#' | '(' | ')' | ',' | ';'))
        {
            return Err(LabelError::ForbiddenChar(token.to_string(), c));
        }
        Ok(VertexLabel::Atom(token.into()))
    }

    pub fn tuple(components: Vec<VertexLabel>) -> Self {
        VertexLabel::Tuple(components.into())
    }

    /// Number of tuple components, or `None` for an atom.
    pub fn arity(&self) -> Option<usize> {
        match self {
            VertexLabel::Atom(_) => None,
            VertexLabel::Tuple(c) => Some(c.len()),
        }
    }

    pub fn component(&self, i: usize) -> Option<&VertexLabel> {
        match self {
            VertexLabel::Atom(_) => None,
            VertexLabel::Tuple(c) => c.get(i),
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Atom(s) => f.write_str(s),
            VertexLabel::Tuple(parts) => {
                f.write_str("(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for VertexLabel {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser { src: s, pos: 0 };
        let label = parser.label()?;
        if parser.pos != s.len() {
            return Err(LabelError::Malformed(s.to_string()));
        }
        Ok(label)
    }
}

impl From<&str> for VertexLabel {
    /// Panics on malformed input; intended for literals in tests and examples.
    fn from(s: &str) -> Self {
        s.parse().unwrap_or_else(|e| panic!("bad vertex label {s:?}: {e}"))
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn label(&mut self) -> Result<VertexLabel, LabelError> {
        let rest = &self.src[self.pos..];
        if rest.starts_with('(') {
            self.pos += 1;
            let mut parts = vec![self.label()?];
            loop {
                match self.src[self.pos..].chars().next() {
                    Some(',') => {
                        self.pos += 1;
                        parts.push(self.label()?);
                    }
                    Some(')') => {
                        self.pos += 1;
                        return Ok(VertexLabel::tuple(parts));
                    }
                    _ => return Err(LabelError::Malformed(self.src.to_string())),
                }
            }
        }
        let len = rest
            .find(['(', ')', ','])
            .unwrap_or(rest.len());
        let token = &rest[..len];
        self.pos += len;
        VertexLabel::atom(token)
    }
}
