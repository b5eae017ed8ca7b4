//! Certificate checking. Uses only complex construction and [`contiguous`],
//! never the search code.

use std::sync::Arc;

use thiserror::Error;

use crate::complex::{Simplex, SimplicialComplex};
use crate::contiguity::contiguous;
use crate::map::SimplicialMap;

use super::SdCertificate;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertificateDefect {
    #[error("fewer than two maps, or maps without a shared domain and codomain")]
    BadMaps,
    #[error("value {value} does not match {pieces} pieces")]
    ValueMismatch { value: usize, pieces: usize },
    #[error("piece {0} is empty")]
    EmptyPiece(usize),
    #[error("piece {piece} lists {facet}, which is not a facet of the domain")]
    NotAFacet { piece: usize, facet: Simplex },
    #[error("facet {0} is not covered")]
    UncoveredFacet(Simplex),
    #[error("piece {0} does not carry one witness per consecutive map pair")]
    WitnessCount(usize),
    #[error("witness {pair} of piece {piece} lives on the wrong complexes")]
    WrongComplex { piece: usize, pair: usize },
    #[error("witness {pair} of piece {piece} has the wrong endpoints")]
    WrongEndpoints { piece: usize, pair: usize },
    #[error("witness {pair} of piece {piece} breaks at step {step}")]
    BrokenStep { piece: usize, pair: usize, step: usize },
}

/// First defect found, or `None` for a valid certificate.
pub fn certificate_defect(cert: &SdCertificate, maps: &[SimplicialMap]) -> Option<CertificateDefect> {
    if maps.len() < 2
        || maps.iter().any(|m| **m.domain() != **maps[0].domain() || **m.codomain() != **maps[0].codomain())
    {
        return Some(CertificateDefect::BadMaps);
    }
    let dom = maps[0].domain();
    let cod = maps[0].codomain();
    if cert.pieces.len() != cert.value + 1 {
        return Some(CertificateDefect::ValueMismatch {
            value: cert.value,
            pieces: cert.pieces.len(),
        });
    }
    let facets = dom.facet_simplices();
    for (k, piece) in cert.pieces.iter().enumerate() {
        if piece.is_empty() {
            return Some(CertificateDefect::EmptyPiece(k));
        }
        if let Some(s) = piece.iter().find(|s| !facets.contains(s)) {
            return Some(CertificateDefect::NotAFacet {
                piece: k,
                facet: s.clone(),
            });
        }
    }
    if let Some(s) = facets.iter().find(|s| !cert.pieces.iter().any(|p| p.contains(s))) {
        return Some(CertificateDefect::UncoveredFacet(s.clone()));
    }
    if cert.witnesses.len() != cert.pieces.len() {
        return Some(CertificateDefect::WitnessCount(cert.witnesses.len().min(cert.pieces.len())));
    }
    for (k, (piece, chains)) in cert.pieces.iter().zip(&cert.witnesses).enumerate() {
        if chains.len() != maps.len() - 1 {
            return Some(CertificateDefect::WitnessCount(k));
        }
        let sub = match SimplicialComplex::build(piece.iter().map(|s| s.vertices().to_vec()).collect()) {
            Ok(s) => Arc::new(s),
            Err(_) => return Some(CertificateDefect::EmptyPiece(k)),
        };
        for (i, seq) in chains.iter().enumerate() {
            let wrong = CertificateDefect::WrongComplex { piece: k, pair: i };
            if seq
                .maps()
                .iter()
                .any(|m| **m.domain() != *sub || **m.codomain() != **cod)
            {
                return Some(wrong);
            }
            let (Ok(a), Ok(b)) = (maps[i].restrict(&sub), maps[i + 1].restrict(&sub)) else {
                return Some(wrong);
            };
            if seq.first() != &a || seq.last() != &b {
                return Some(CertificateDefect::WrongEndpoints { piece: k, pair: i });
            }
            for (step, w) in seq.maps().windows(2).enumerate() {
                if !matches!(contiguous(&w[0], &w[1]), Ok(true)) {
                    return Some(CertificateDefect::BrokenStep {
                        piece: k,
                        pair: i,
                        step,
                    });
                }
            }
        }
    }
    None
}

/// Re-checks cover totality and every witness step.
pub fn verify_certificate(cert: &SdCertificate, maps: &[SimplicialMap]) -> bool {
    certificate_defect(cert, maps).is_none()
}
