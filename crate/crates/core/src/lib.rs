//! Exact computation of contiguity distance, discrete topological complexity
//! and simplicial LS-category for finite simplicial complexes and maps.
//!
//! Every numeric answer comes with a certificate: a cover of the domain by
//! facet sets and, on each piece, explicit chains of contiguous maps. The
//! search is exact or reports that its budget ran out; it never guesses.

pub mod audit;
pub mod collapse;
pub mod complex;
pub mod contiguity;
pub mod corpus;
pub mod distance;
mod engine;
pub mod error;
mod homology;
pub mod invariants;
pub mod io;
mod iso;
pub mod label;
pub mod map;
pub mod par;
pub mod random;
pub mod suite;

use std::time::Duration;

pub use collapse::{
    core, dominated_vertices, is_strongly_collapsible, same_strong_homotopy_type,
    verify_strong_equivalence, CoreResult,
};
pub use complex::{Simplex, SimplicialComplex, VertexId};
pub use contiguity::{contiguous, same_contiguity_class, ClassVerdict, ContiguitySequence};
pub use distance::{
    sd, sd_oracle, verify_certificate, CertificateDefect, CoverStrategy, SdCertificate, SdOutcome,
};
pub use error::{Error, ParseError, Result};
pub use iso::are_isomorphic;
pub use label::VertexLabel;
pub use map::{SimplicialMap, SurjectivityReport};

/// Resource bounds for the exact searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maps visited by a single class search.
    pub max_bfs_states: usize,
    /// Distinct facet sets whose admissibility may be evaluated by one
    /// distance computation.
    pub max_piece_candidates: usize,
    pub time_limit: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_bfs_states: 5_000_000,
            max_piece_candidates: 2_000_000,
            time_limit: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: SearchBudget,
    /// Replace domains and codomains by their cores before searching.
    pub reduce_cores: bool,
    pub cover: CoverStrategy,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: SearchBudget::default(),
            reduce_cores: true,
            cover: CoverStrategy::Auto,
        }
    }
}
