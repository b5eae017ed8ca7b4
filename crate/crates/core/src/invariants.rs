//! Topological complexity and LS-category of complexes and maps, each
//! computed as a contiguity distance.
//!
//! Values use the reduced convention (pieces minus one); the raw piece count
//! is carried alongside.

use std::fmt;
use std::sync::Arc;

use crate::complex::SimplicialComplex;
use crate::distance::{sd, SdCertificate};
use crate::error::{Error, Result};
use crate::label::VertexLabel;
use crate::map::{SimplicialMap, SurjectivityReport};
use crate::SearchOptions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvariantName {
    Tc,
    TcN(usize),
    Scat,
    ScatMap,
    TcMap,
    TcNMap(usize),
}

impl fmt::Display for InvariantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantName::Tc => f.write_str("TC"),
            InvariantName::TcN(n) => write!(f, "TC_{n}"),
            InvariantName::Scat => f.write_str("scat"),
            InvariantName::ScatMap => f.write_str("scat_map"),
            InvariantName::TcMap => f.write_str("TC_map"),
            InvariantName::TcNMap(n) => write!(f, "TC_{n}_map"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Preconditions {
    pub connected: bool,
    /// Present for invariants of maps.
    pub surjectivity: Option<SurjectivityReport>,
    /// Fibration status is taken on trust, never checked.
    pub fibration_assumed: bool,
}

#[derive(Clone, Debug)]
pub struct InvariantResult {
    pub name: InvariantName,
    pub value: usize,
    pub pieces: usize,
    pub certificate: SdCertificate,
    /// The maps whose distance was computed; the certificate refers to them.
    pub maps: Vec<SimplicialMap>,
    pub preconditions: Preconditions,
}

fn connected(k: &SimplicialComplex) -> Result<()> {
    if k.is_edge_path_connected() {
        Ok(())
    } else {
        Err(Error::NotConnected)
    }
}

/// The basepoint override, or the least vertex.
pub fn basepoint(k: &SimplicialComplex, v0: Option<&VertexLabel>) -> Result<VertexLabel> {
    match v0 {
        Some(v) if k.id_of(v).is_some() => Ok(v.clone()),
        Some(v) => Err(Error::UnknownVertex(v.clone())),
        None => Ok(k.label(0).clone()),
    }
}

/// A named map tuple whose contiguity distance is the invariant.
#[derive(Clone, Debug)]
pub struct InvariantTuple {
    pub name: InvariantName,
    pub maps: Vec<SimplicialMap>,
    pub preconditions: Preconditions,
}

pub fn evaluate(t: InvariantTuple, opts: &SearchOptions) -> Result<InvariantResult> {
    let out = sd(&t.maps, opts)?;
    Ok(InvariantResult {
        name: t.name,
        value: out.value,
        pieces: out.pieces,
        certificate: out.certificate,
        maps: t.maps,
        preconditions: t.preconditions,
    })
}

fn complex_pre() -> Preconditions {
    Preconditions {
        connected: true,
        ..Preconditions::default()
    }
}

/// The projections `L^n -> L`.
pub fn projections(l: &Arc<SimplicialComplex>, n: usize) -> Result<Vec<SimplicialMap>> {
    if n < 2 {
        return Err(Error::InvalidArity(n));
    }
    let p = Arc::new(l.power(n)?);
    (1..=n).map(|i| SimplicialMap::projection(&p, l, i)).collect()
}

pub fn tc_tuple(l: &Arc<SimplicialComplex>, n: usize) -> Result<InvariantTuple> {
    connected(l)?;
    Ok(InvariantTuple {
        name: if n == 2 { InvariantName::Tc } else { InvariantName::TcN(n) },
        maps: projections(l, n)?,
        preconditions: complex_pre(),
    })
}

pub fn scat_tuple(l: &Arc<SimplicialComplex>, v0: Option<&VertexLabel>) -> Result<InvariantTuple> {
    connected(l)?;
    let v0 = basepoint(l, v0)?;
    Ok(InvariantTuple {
        name: InvariantName::Scat,
        maps: vec![SimplicialMap::identity(l), SimplicialMap::constant(l, l, &v0)?],
        preconditions: complex_pre(),
    })
}

pub fn scat_inclusions_tuple(l: &Arc<SimplicialComplex>, v0: Option<&VertexLabel>) -> Result<InvariantTuple> {
    connected(l)?;
    let v0 = basepoint(l, v0)?;
    let square = Arc::new(l.power(2)?);
    Ok(InvariantTuple {
        name: InvariantName::Scat,
        maps: vec![
            SimplicialMap::basepoint_inclusion(l, &square, &v0, 1)?,
            SimplicialMap::basepoint_inclusion(l, &square, &v0, 2)?,
        ],
        preconditions: complex_pre(),
    })
}

pub fn scat_map_tuple(phi: &SimplicialMap, v0: Option<&VertexLabel>) -> Result<InvariantTuple> {
    let l = phi.domain();
    connected(l)?;
    let v0 = basepoint(l, v0)?;
    let c = SimplicialMap::constant(l, l, &v0)?;
    Ok(InvariantTuple {
        name: InvariantName::ScatMap,
        maps: vec![phi.clone(), SimplicialMap::compose(phi, &c)?],
        preconditions: Preconditions {
            connected: true,
            surjectivity: Some(phi.surjectivity_report()),
            fibration_assumed: false,
        },
    })
}

fn fibration_pre(phi: &SimplicialMap) -> Result<Preconditions> {
    connected(phi.domain())?;
    connected(phi.codomain())?;
    let report = phi.surjectivity_report();
    if !report.vertex_surjective {
        return Err(Error::NotSurjective("vertex"));
    }
    if !report.simplex_surjective {
        return Err(Error::NotSurjective("simplex"));
    }
    Ok(Preconditions {
        connected: true,
        surjectivity: Some(report),
        fibration_assumed: true,
    })
}

pub fn tc_map_tuple(phi: &SimplicialMap) -> Result<InvariantTuple> {
    let preconditions = fibration_pre(phi)?;
    let (l, lp) = (phi.domain(), phi.codomain());
    let prod = Arc::new(l.categorical_product(lp));
    let p1 = SimplicialMap::projection(&prod, l, 1)?;
    let p2 = SimplicialMap::projection(&prod, lp, 2)?;
    Ok(InvariantTuple {
        name: InvariantName::TcMap,
        maps: vec![SimplicialMap::compose(phi, &p1)?, p2],
        preconditions,
    })
}

pub fn tc_map_n_tuple(phi: &SimplicialMap, n: usize) -> Result<InvariantTuple> {
    let preconditions = fibration_pre(phi)?;
    let maps = projections(phi.domain(), n)?
        .iter()
        .map(|p| SimplicialMap::compose(phi, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantTuple {
        name: InvariantName::TcNMap(n),
        maps,
        preconditions,
    })
}

/// `TC_n(L)`; `n = 2` gives `TC(L)`.
pub fn tc(l: &Arc<SimplicialComplex>, n: usize, opts: &SearchOptions) -> Result<InvariantResult> {
    evaluate(tc_tuple(l, n)?, opts)
}

/// `scat(L)` as the distance from the identity to a constant map.
pub fn scat(l: &Arc<SimplicialComplex>, v0: Option<&VertexLabel>, opts: &SearchOptions) -> Result<InvariantResult> {
    evaluate(scat_tuple(l, v0)?, opts)
}

/// `scat(L)` as the distance between the two axis inclusions `L -> L²`.
pub fn scat_inclusions(
    l: &Arc<SimplicialComplex>,
    v0: Option<&VertexLabel>,
    opts: &SearchOptions,
) -> Result<InvariantResult> {
    evaluate(scat_inclusions_tuple(l, v0)?, opts)
}

/// `scat(φ)`: distance from `φ` to `φ` composed with a constant.
pub fn scat_map(phi: &SimplicialMap, v0: Option<&VertexLabel>, opts: &SearchOptions) -> Result<InvariantResult> {
    evaluate(scat_map_tuple(phi, v0)?, opts)
}

/// `TC(φ)` as the distance between `φ∘π1` and `π2` on `L × L'`. The map is
/// taken to be a fibration without checking.
pub fn tc_map(phi: &SimplicialMap, opts: &SearchOptions) -> Result<InvariantResult> {
    evaluate(tc_map_tuple(phi)?, opts)
}

/// `TC_n(φ)` as the distance between the composites `φ∘p_i` on `L^n`.
pub fn tc_map_n(phi: &SimplicialMap, n: usize, opts: &SearchOptions) -> Result<InvariantResult> {
    evaluate(tc_map_n_tuple(phi, n)?, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::verify_certificate;

    fn k(f: &[&[&str]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_tokens(f).unwrap())
    }

    #[test]
    fn simplex_and_point() {
        let opts = SearchOptions::default();
        let s = k(&[&["a", "b", "c"]]);
        assert_eq!(tc(&s, 2, &opts).unwrap().value, 0);
        let p = k(&[&["p"]]);
        for n in [2, 3] {
            assert_eq!(tc(&p, n, &opts).unwrap().value, 0);
        }
        assert_eq!(scat(&p, None, &opts).unwrap().value, 0);
    }

    #[test]
    fn cycle_scat_both_ways() {
        let opts = SearchOptions::default();
        let c3 = k(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
        let a = scat(&c3, None, &opts).unwrap();
        let b = scat_inclusions(&c3, None, &opts).unwrap();
        assert_eq!(a.value, 1);
        assert_eq!(b.value, 1);
        assert!(verify_certificate(&b.certificate, &b.maps));
    }

    #[test]
    fn disconnected_rejected() {
        let two = k(&[&["a"], &["b"]]);
        assert!(matches!(tc(&two, 2, &SearchOptions::default()), Err(Error::NotConnected)));
    }

    #[test]
    fn non_surjective_rejected() {
        let s = k(&[&["a", "b"]]);
        let c3 = k(&[&["x", "y"], &["y", "z"], &["x", "z"]]);
        let f = SimplicialMap::constant(&s, &c3, &"x".into()).unwrap();
        assert!(matches!(tc_map(&f, &SearchOptions::default()), Err(Error::NotSurjective(_))));
    }
}
