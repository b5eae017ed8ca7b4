//! The fixed test corpus: small named complexes, the figure example, a
//! seeded batch of random connected complexes, and the maps declared to be
//! fibrations over them (isomorphisms and first projections).

use std::sync::Arc;

use crate::complex::SimplicialComplex;
use crate::error::Result;
use crate::io::{parse_complex_str, parse_map_body};
use crate::map::SimplicialMap;
use crate::random::{random_complex, rng, RandomInstanceSpec};

pub const FIG1_L: &str = include_str!("../data/fig1_L.cplx");
pub const FIG1_LP: &str = include_str!("../data/fig1_Lp.cplx");
pub const FIG1_PHI: &str = include_str!("../data/fig1_phi.smap");

pub const CORPUS_SEED: u64 = 2024;
pub const RANDOM_COUNT: usize = 25;
pub const RANDOM_FACET_PROBABILITY: f64 = 0.3;

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub complex: Arc<SimplicialComplex>,
}

#[derive(Clone, Debug)]
pub struct Fibration {
    pub name: String,
    pub map: SimplicialMap,
}

fn entry(name: &str, facets: &[&[&str]]) -> Entry {
    Entry {
        name: name.into(),
        complex: Arc::new(SimplicialComplex::from_tokens(facets).expect("fixed corpus complex")),
    }
}

pub fn fig1() -> (Arc<SimplicialComplex>, Arc<SimplicialComplex>, SimplicialMap) {
    let l = Arc::new(parse_complex_str(FIG1_L).expect("shipped file"));
    let lp = Arc::new(parse_complex_str(FIG1_LP).expect("shipped file"));
    let body: String = FIG1_PHI.lines().skip(1).collect::<Vec<_>>().join("\n");
    let phi = parse_map_body(&body, l.clone(), lp.clone()).expect("shipped file");
    (l, lp, phi)
}

/// Seeded random connected complexes on 3, 4 and 5 vertices in turn.
pub fn random_entries(count: usize, seed: u64) -> Vec<Entry> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let spec = RandomInstanceSpec {
                vertex_count: 3 + i % 3,
                facet_probability: RANDOM_FACET_PROBABILITY,
                require_connected: true,
            };
            Entry {
                name: format!("random{i:02}"),
                complex: Arc::new(random_complex(&spec, &mut r).expect("connected complexes exist")),
            }
        })
        .collect()
}

pub fn fixed_entries() -> Vec<Entry> {
    let (l, lp, _) = fig1();
    let mut out = vec![
        entry("point", &[&["p"]]),
        entry("simplex1", &[&["a", "b"]]),
        entry("simplex2", &[&["a", "b", "c"]]),
        entry("simplex3", &[&["a", "b", "c", "d"]]),
        entry("cycle3", &[&["a", "b"], &["b", "c"], &["a", "c"]]),
        entry("cycle4", &[&["a", "b"], &["b", "c"], &["c", "d"], &["a", "d"]]),
    ];
    out.push(Entry {
        name: "fig1_L".into(),
        complex: l,
    });
    out.push(Entry {
        name: "fig1_Lp".into(),
        complex: lp,
    });
    out
}

pub fn corpus() -> Vec<Entry> {
    let mut out = fixed_entries();
    out.extend(random_entries(RANDOM_COUNT, CORPUS_SEED));
    out
}

/// First projection `L × I -> L`, with `I` a closed 1-simplex.
pub fn first_projection(l: &Arc<SimplicialComplex>) -> Result<SimplicialMap> {
    let interval = Arc::new(SimplicialComplex::from_tokens(&[&["s", "t"]])?);
    let prod = Arc::new(l.categorical_product(&interval));
    SimplicialMap::projection(&prod, l, 1)
}

/// For each entry the identity and the first projection, plus the figure
/// map and its inverse.
pub fn fibrations(entries: &[Entry]) -> Result<Vec<Fibration>> {
    let mut out = Vec::new();
    for e in entries {
        out.push(Fibration {
            name: format!("id[{}]", e.name),
            map: SimplicialMap::identity(&e.complex),
        });
        out.push(Fibration {
            name: format!("pr1[{}]", e.name),
            map: first_projection(&e.complex)?,
        });
    }
    let (_, _, phi) = fig1();
    out.push(Fibration {
        name: "fig1_phi^-1".into(),
        map: phi.inverse().expect("the figure map is an isomorphism"),
    });
    out.push(Fibration {
        name: "fig1_phi".into(),
        map: phi,
    });
    Ok(out)
}

/// Composable pairs `(φ, ψ)` of corpus fibrations, to be read as `ψ ∘ φ`.
pub fn composable_pairs(fibs: &[Fibration]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, a) in fibs.iter().enumerate() {
        for (j, b) in fibs.iter().enumerate() {
            let chain = **a.map.codomain() == **b.map.domain();
            let figure = a.name.starts_with("fig1") || b.name.starts_with("fig1");
            let projection_then_id = a.name.starts_with("pr1[") && b.name.starts_with("id[");
            if chain && (figure || projection_then_id) {
                out.push((i, j));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        let c = corpus();
        assert_eq!(c.len(), 8 + RANDOM_COUNT);
        assert!(c.iter().all(|e| e.complex.is_edge_path_connected()));
        assert!(c.iter().all(|e| e.complex.vertex_count() <= 5));
        let again = corpus();
        assert!(c.iter().zip(&again).all(|(a, b)| a.complex == b.complex));
    }

    #[test]
    fn fibrations_are_surjective() {
        let fibs = fibrations(&fixed_entries()).unwrap();
        for f in &fibs {
            let r = f.map.surjectivity_report();
            assert!(r.vertex_surjective && r.simplex_surjective, "{}", f.name);
        }
        assert!(!composable_pairs(&fibs).is_empty());
    }
}
