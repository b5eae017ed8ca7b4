//! Strong collapses: dominated vertices, cores, strong homotopy type.
//!
//! A vertex `v` is dominated by `w != v` when `w` lies in every facet through
//! `v`. Deleting a dominated vertex is a strong collapse; the retraction
//! `v -> w` is contiguous to the identity, so each deletion contributes one
//! contiguity step between the identity and `inclusion ∘ retraction`.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::complex::{to_bits, SimplicialComplex, VertexId};
use crate::contiguity::{same_contiguity_class, ClassVerdict};
use crate::error::{Error, Result};
use crate::iso::find_isomorphism;
use crate::label::VertexLabel;
use crate::map::SimplicialMap;
use crate::SearchOptions;

/// Result of collapsing a vertex-id-level complex, in the ids of the
/// surrounding complex.
#[derive(Clone, Debug)]
pub(crate) struct Collapse {
    pub(crate) alive: Vec<u32>,
    pub(crate) facets: Vec<Vec<u32>>,
    pub(crate) log: Vec<(u32, u32)>,
}

impl Collapse {
    /// Partial retractions `rho_0 = id, ..., rho_s = inclusion ∘ retraction`
    /// as tables over `0..n`; ids outside the collapsed complex map to
    /// themselves.
    pub(crate) fn chain(&self, n: usize) -> Vec<Vec<u32>> {
        let mut cur: Vec<u32> = (0..n as u32).collect();
        let mut out = Vec::with_capacity(self.log.len() + 1);
        out.push(cur.clone());
        for &(v, w) in &self.log {
            for x in cur.iter_mut() {
                if *x == v {
                    *x = w;
                }
            }
            out.push(cur.clone());
        }
        out
    }

    pub(crate) fn retraction(&self, n: usize) -> Vec<u32> {
        self.chain(n).pop().unwrap()
    }
}

fn first_dominated(n: usize, alive: &[u32], facets: &[FixedBitSet]) -> Option<(u32, u32)> {
    for &v in alive {
        let mut inter: Option<FixedBitSet> = None;
        for f in facets.iter().filter(|f| f.contains(v as usize)) {
            match inter.as_mut() {
                None => inter = Some(f.clone()),
                Some(i) => i.intersect_with(f),
            }
        }
        let mut inter = inter.unwrap_or_else(|| FixedBitSet::with_capacity(n));
        inter.set(v as usize, false);
        if let Some(w) = inter.ones().next() {
            return Some((v, w as u32));
        }
    }
    None
}

/// Repeatedly deletes the least dominated vertex until none remains.
/// `vertices` must be sorted and equal to the union of `facets`.
pub(crate) fn collapse(n: usize, vertices: &[u32], facets: &[Vec<u32>]) -> Collapse {
    let mut alive = vertices.to_vec();
    let mut bits: Vec<FixedBitSet> = facets.iter().map(|f| to_bits(n, f)).collect();
    let mut log = Vec::new();
    while let Some((v, w)) = first_dominated(n, &alive, &bits) {
        log.push((v, w));
        alive.retain(|&x| x != v);
        for f in bits.iter_mut() {
            f.set(v as usize, false);
        }
        // drop facets that became non-maximal (or duplicates)
        let mut keep: Vec<FixedBitSet> = Vec::with_capacity(bits.len());
        let mut order: Vec<usize> = (0..bits.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(bits[i].count_ones(..)));
        for i in order {
            if !keep.iter().any(|k| bits[i].is_subset(k)) {
                keep.push(bits[i].clone());
            }
        }
        bits = keep;
    }
    let mut facets: Vec<Vec<u32>> = bits
        .iter()
        .map(|b| b.ones().map(|v| v as u32).collect())
        .collect();
    facets.sort();
    Collapse { alive, facets, log }
}

pub(crate) fn collapse_complex(k: &SimplicialComplex) -> Collapse {
    let all: Vec<u32> = (0..k.vertex_count() as u32).collect();
    collapse(k.vertex_count(), &all, k.facets())
}

/// Dominated vertices of `k` with their least dominating vertex, in label
/// order.
pub fn dominated_vertices(k: &SimplicialComplex) -> Vec<(VertexLabel, VertexLabel)> {
    let n = k.vertex_count();
    let bits = k.facet_bits();
    (0..n as VertexId)
        .filter_map(|v| {
            let mut inter: Option<FixedBitSet> = None;
            for &fi in k.incident_facets(v) {
                let f = &bits[fi as usize];
                match inter.as_mut() {
                    None => inter = Some(f.clone()),
                    Some(i) => i.intersect_with(f),
                }
            }
            let mut inter = inter?;
            inter.set(v as usize, false);
            let w = inter.ones().next()?;
            Some((k.label(v).clone(), k.label(w as VertexId).clone()))
        })
        .collect()
}

/// A core of `k` with the inclusion and retraction between them.
#[derive(Clone, Debug)]
pub struct CoreResult {
    pub core: Arc<SimplicialComplex>,
    pub inclusion: SimplicialMap,
    pub retraction: SimplicialMap,
    /// Deleted vertices in order, each with the vertex that dominated it.
    pub collapse_log: Vec<(VertexLabel, VertexLabel)>,
}

pub(crate) fn core_complex(k: &SimplicialComplex, c: &Collapse) -> SimplicialComplex {
    let mut local = vec![u32::MAX; k.vertex_count()];
    for (i, &v) in c.alive.iter().enumerate() {
        local[v as usize] = i as u32;
    }
    let labels = c.alive.iter().map(|&v| k.label(v).clone()).collect();
    let facets = c
        .facets
        .iter()
        .map(|f| f.iter().map(|&v| local[v as usize]).collect())
        .collect();
    SimplicialComplex::from_parts(labels, facets)
}

pub fn core(k: &Arc<SimplicialComplex>) -> CoreResult {
    let c = collapse_complex(k);
    let core = Arc::new(core_complex(k, &c));
    let inclusion = SimplicialMap::from_images_unchecked(core.clone(), k.clone(), c.alive.clone());
    let mut local = vec![u32::MAX; k.vertex_count()];
    for (i, &v) in c.alive.iter().enumerate() {
        local[v as usize] = i as u32;
    }
    let r = c.retraction(k.vertex_count());
    let retraction = SimplicialMap::from_images_unchecked(
        k.clone(),
        core.clone(),
        r.iter().map(|&v| local[v as usize]).collect(),
    );
    let collapse_log = c
        .log
        .iter()
        .map(|&(v, w)| (k.label(v).clone(), k.label(w).clone()))
        .collect();
    CoreResult {
        core,
        inclusion,
        retraction,
        collapse_log,
    }
}

pub fn is_strongly_collapsible(k: &SimplicialComplex) -> bool {
    collapse_complex(k).alive.len() == 1
}

/// Decided by comparing cores up to isomorphism.
pub fn same_strong_homotopy_type(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    let ca = core_complex(a, &collapse_complex(a));
    let cb = core_complex(b, &collapse_complex(b));
    find_isomorphism(&ca, &cb).is_some()
}

/// True iff `omega ∘ phi ~ 1` and `phi ∘ omega ~ 1`. An inconclusive class
/// search is reported as [`Error::BudgetExhausted`].
pub fn verify_strong_equivalence(
    phi: &SimplicialMap,
    omega: &SimplicialMap,
    opts: &SearchOptions,
) -> Result<bool> {
    let checks = [
        (SimplicialMap::compose(omega, phi)?, SimplicialMap::identity(phi.domain())),
        (SimplicialMap::compose(phi, omega)?, SimplicialMap::identity(phi.codomain())),
    ];
    for (lhs, id) in &checks {
        match same_contiguity_class(lhs, id, opts)? {
            ClassVerdict::Equivalent(_) => {}
            ClassVerdict::NotEquivalent { .. } => return Ok(false),
            ClassVerdict::Unknown { budget } => {
                return Err(Error::BudgetExhausted(format!(
                    "strong equivalence check exceeded {budget} states"
                )))
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contiguity::contiguous;

    fn k(f: &[&[&str]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_tokens(f).unwrap())
    }

    fn fig1_l() -> Arc<SimplicialComplex> {
        k(&[&["v0", "v1"], &["v1", "v2"], &["v1", "v3"], &["v2", "v3"]])
    }

    fn cycle3() -> Arc<SimplicialComplex> {
        k(&[&["a", "b"], &["b", "c"], &["a", "c"]])
    }

    #[test]
    fn dominated_in_simplex_and_cycle() {
        let s = k(&[&["a", "b", "c"]]);
        let d = dominated_vertices(&s);
        assert_eq!(
            d,
            vec![("a".into(), "b".into()), ("b".into(), "a".into()), ("c".into(), "a".into())]
        );
        assert!(dominated_vertices(&cycle3()).is_empty());
        assert_eq!(dominated_vertices(&fig1_l()), vec![("v0".into(), "v1".into())]);
        assert!(dominated_vertices(&k(&[&["x"]])).is_empty());
    }

    #[test]
    fn cores() {
        let s = k(&[&["a", "b", "c", "d"]]);
        let c = core(&s);
        assert_eq!(c.core.vertex_count(), 1);
        assert!(is_strongly_collapsible(&s));

        let c3 = cycle3();
        assert_eq!(*core(&c3).core, *c3);
        assert!(!is_strongly_collapsible(&c3));

        let l = fig1_l();
        let c = core(&l);
        assert_eq!(*c.core, *k(&[&["v1", "v2"], &["v1", "v3"], &["v2", "v3"]]));
        assert_eq!(c.collapse_log, vec![("v0".into(), "v1".into())]);
        assert!(!is_strongly_collapsible(&l));
        let ri = SimplicialMap::compose(&c.retraction, &c.inclusion).unwrap();
        assert_eq!(ri, SimplicialMap::identity(&c.core));
        let ir = SimplicialMap::compose(&c.inclusion, &c.retraction).unwrap();
        assert!(contiguous(&ir, &SimplicialMap::identity(&l)).unwrap());
    }

    #[test]
    fn core_is_idempotent() {
        let l = fig1_l();
        let c1 = core(&l).core;
        let c2 = core(&c1).core;
        assert_eq!(*c1, *c2);
    }

    #[test]
    fn strong_homotopy_type() {
        let l = fig1_l();
        let lp = k(&[&["w0", "w2"], &["w1", "w2"], &["w1", "w3"], &["w2", "w3"]]);
        assert!(same_strong_homotopy_type(&l, &lp));
        assert!(same_strong_homotopy_type(&l, &l));
        assert!(!same_strong_homotopy_type(&cycle3(), &k(&[&["p"]])));
        assert!(same_strong_homotopy_type(&k(&[&["a", "b"], &["b", "c"]]), &k(&[&["p"]])));
    }

    #[test]
    fn strong_equivalences() {
        let opts = SearchOptions::default();
        let l = fig1_l();
        let id = SimplicialMap::identity(&l);
        assert!(verify_strong_equivalence(&id, &id, &opts).unwrap());
        let c = core(&l);
        assert!(verify_strong_equivalence(&c.inclusion, &c.retraction, &opts).unwrap());
        let c3 = cycle3();
        let pt = k(&[&["p"]]);
        let to_pt = SimplicialMap::constant(&c3, &pt, &"p".into()).unwrap();
        let back = SimplicialMap::constant(&pt, &c3, &"a".into()).unwrap();
        assert!(!verify_strong_equivalence(&to_pt, &back, &opts).unwrap());
    }
}
