use thiserror::Error;

use crate::label::VertexLabel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("empty vertex label")]
    Empty,
    #[error("vertex label {0:?} contains forbidden character {1:?}")]
    ForbiddenChar(String, char),
    #[error("malformed vertex label {0:?}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("invalid arity {0}")]
    InvalidArity(usize),
    #[error("{0} is not a simplex of the complex")]
    NotASimplex(String),
    #[error("vertex {0} does not belong to the complex")]
    UnknownVertex(VertexLabel),
    #[error("vertex {0} has no image")]
    MissingVertex(VertexLabel),
    #[error("vertex {0} is assigned more than once")]
    DuplicateAssignment(VertexLabel),
    #[error("facet {0} is not carried to a simplex")]
    NotSimplicial(String),
    #[error("maps do not share domain and codomain")]
    DomainMismatch,
    #[error("complex is not a subcomplex of the map's domain")]
    NotSubcomplex,
    #[error("complex is not edge-path connected")]
    NotConnected,
    #[error("map is not {0}-surjective")]
    NotSurjective(&'static str),
    #[error("at least two maps are required")]
    TooFewMaps,
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("no admissible cover: the maps already disagree up to contiguity on facet {0}")]
    NoCover(String),
    #[error("codomain has {0} vertices; class search supports at most 128")]
    CodomainTooLarge(usize),
    #[error("oracle supports at most {limit} facets, got {facets}")]
    OracleTooLarge { facets: usize, limit: usize },
    #[error("random generation failed: {0}")]
    GenerationFailed(String),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
