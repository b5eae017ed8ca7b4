//! Contiguity and contiguity classes.
//!
//! Two maps `f, g: K -> K'` are contiguous when `f(σ) ∪ g(σ)` is a simplex
//! for every facet `σ`. Class membership is decided by BFS over the finite
//! graph of simplicial maps, after replacing domain and codomain by their
//! cores: with `ι, r` the core inclusion and retraction, `ι∘r ~ 1`, so
//! `f ~ g` iff `f∘ι ~ g∘ι`, and likewise on the codomain side. Found chains
//! are lifted back along the collapse steps, so every returned sequence lives
//! on the original complexes.

use std::sync::{Arc, OnceLock};
use std::time::Instant;

use crate::collapse::{collapse, collapse_complex};
use crate::complex::SimplicialComplex;
use crate::engine::{class_path, Limits, PathSearch, Source, Target};
use crate::error::{Error, Result};
use crate::homology::Boundaries;
use crate::map::{same_complex, SimplicialMap};
use crate::SearchOptions;

/// A chain of maps with consecutive members contiguous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContiguitySequence {
    steps: Vec<SimplicialMap>,
}

impl ContiguitySequence {
    pub fn new(steps: Vec<SimplicialMap>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptyInput("contiguity sequence"));
        }
        Ok(ContiguitySequence { steps })
    }

    pub fn maps(&self) -> &[SimplicialMap] {
        &self.steps
    }

    /// Number of contiguity steps (maps minus one).
    pub fn step_count(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn first(&self) -> &SimplicialMap {
        &self.steps[0]
    }

    pub fn last(&self) -> &SimplicialMap {
        self.steps.last().unwrap()
    }

    /// Index `i` of the first pair `(i, i + 1)` that is not contiguous, or a
    /// map that does not share the first map's domain and codomain.
    pub fn first_broken_step(&self) -> Option<usize> {
        self.steps
            .windows(2)
            .position(|w| !matches!(contiguous(&w[0], &w[1]), Ok(true)))
    }

    pub fn verify(&self) -> bool {
        self.first_broken_step().is_none()
    }
}

#[derive(Clone, Debug)]
pub enum ClassVerdict {
    Equivalent(ContiguitySequence),
    /// The component of one map was exhausted without meeting the other.
    NotEquivalent { states_exhausted: usize },
    /// The state budget ran out first.
    Unknown { budget: usize },
}

impl ClassVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, ClassVerdict::Equivalent(_))
    }
}

pub(crate) fn check_shared(f: &SimplicialMap, g: &SimplicialMap) -> Result<()> {
    if same_complex(f.domain(), g.domain()) && same_complex(f.codomain(), g.codomain()) {
        Ok(())
    } else {
        Err(Error::DomainMismatch)
    }
}

pub fn contiguous(f: &SimplicialMap, g: &SimplicialMap) -> Result<bool> {
    check_shared(f, g)?;
    let cod = f.codomain();
    let (a, b) = (f.images(), g.images());
    Ok(f.domain().facets().iter().all(|s| {
        let mut u: Vec<u32> = s
            .iter()
            .flat_map(|&v| [a[v as usize], b[v as usize]])
            .collect();
        u.sort_unstable();
        u.dedup();
        cod.contains_ids(&u)
    }))
}

/// Codomain data shared by all class searches into one complex.
pub(crate) struct CodomainCtx {
    /// Core vertex ids in the codomain, ascending.
    pub(crate) core: Vec<u32>,
    /// Codomain id -> compact core index, `u8::MAX` off the core.
    compact: Vec<u8>,
    pub(crate) target: Target,
    local: Vec<Vec<u32>>,
    homology: OnceLock<Boundaries>,
    /// `kappa_0 = id, ..., kappa_t = inclusion ∘ retraction`.
    pub(crate) chain: Vec<Vec<u32>>,
}

impl CodomainCtx {
    pub(crate) fn new(k: &SimplicialComplex, reduce: bool) -> Result<Self> {
        let n = k.vertex_count();
        let (core, facets, chain) = if reduce {
            let c = collapse_complex(k);
            let chain = c.chain(n);
            (c.alive, c.facets, chain)
        } else {
            ((0..n as u32).collect(), k.facets().to_vec(), vec![(0..n as u32).collect()])
        };
        if core.len() > 128 {
            return Err(Error::CodomainTooLarge(core.len()));
        }
        let mut compact = vec![u8::MAX; n];
        for (i, &v) in core.iter().enumerate() {
            compact[v as usize] = i as u8;
        }
        let local: Vec<Vec<u32>> = facets
            .iter()
            .map(|f| f.iter().map(|&v| compact[v as usize] as u32).collect())
            .collect();
        Ok(CodomainCtx {
            target: Target::new(core.len(), &local),
            homology: OnceLock::new(),
            local,
            core,
            compact,
            chain,
        })
    }

    fn homology(&self) -> &Boundaries {
        self.homology.get_or_init(|| Boundaries::new(self.core.len(), &self.local))
    }

    pub(crate) fn retraction(&self) -> &[u32] {
        self.chain.last().unwrap()
    }
}

const PROBE_STATES: usize = 20_000;

pub(crate) enum PieceVerdict {
    /// Chain of maps restricted to the piece's vertices (in the order of the
    /// `vertices` argument), values in codomain ids.
    Equivalent(Vec<Vec<u32>>),
    NotEquivalent(usize),
    Unknown(usize),
}

/// Class check of `f|P` against `g|P` for the piece `P` spanned by `facets`
/// (ids of the surrounding domain, of which there are `n`). `f` and `g` are
/// full image tables of the surrounding domain.
#[allow(clippy::too_many_arguments)]
pub(crate) fn piece_class(
    cod: &CodomainCtx,
    n: usize,
    vertices: &[u32],
    facets: &[Vec<u32>],
    f: &[u32],
    g: &[u32],
    reduce: bool,
    limits: Limits,
) -> PieceVerdict {
    let restrict = |h: &[u32]| -> Vec<u32> { vertices.iter().map(|&x| h[x as usize]).collect() };
    if vertices.iter().all(|&x| f[x as usize] == g[x as usize]) {
        return PieceVerdict::Equivalent(vec![restrict(f)]);
    }
    let (core_vertices, core_facets, dom_chain) = if reduce {
        let c = collapse(n, vertices, facets);
        let chain = c.chain(n);
        (c.alive, c.facets, chain)
    } else {
        (vertices.to_vec(), facets.to_vec(), vec![(0..n as u32).collect()])
    };
    let kappa = cod.retraction();
    let mut local = vec![u32::MAX; n];
    for (i, &v) in core_vertices.iter().enumerate() {
        local[v as usize] = i as u32;
    }
    let src_facets: Vec<Vec<u32>> = core_facets
        .iter()
        .map(|s| s.iter().map(|&v| local[v as usize]).collect())
        .collect();
    let encode = |h: &[u32]| -> Vec<u8> {
        core_vertices
            .iter()
            .map(|&x| cod.compact[kappa[h[x as usize] as usize] as usize])
            .collect()
    };
    let (ef, eg) = (encode(f), encode(g));
    let wide = |h: &[u8]| -> Vec<u32> { h.iter().map(|&x| x as u32).collect() };
    let src = Source::new(core_vertices.len(), src_facets.clone());
    // Most classes settle quickly; homology is consulted only for the rest.
    let probe = Limits { max_states: limits.max_states.min(PROBE_STATES), ..limits };
    let mut outcome = class_path(&src, &cod.target, &ef, &eg, probe);
    if matches!(outcome, PathSearch::Exhausted(_)) && probe.max_states < limits.max_states {
        if cod.homology().separates(core_vertices.len(), &src_facets, &wide(&ef), &wide(&eg)) {
            return PieceVerdict::NotEquivalent(0);
        }
        outcome = class_path(&src, &cod.target, &ef, &eg, limits);
    }
    match outcome {
        PathSearch::Found(path) => {
            let core_path: Vec<Vec<u32>> = path
                .iter()
                .map(|h| {
                    let mut full = vec![0u32; n];
                    for (i, &x) in core_vertices.iter().enumerate() {
                        full[x as usize] = cod.core[h[i] as usize];
                    }
                    full
                })
                .collect();
            PieceVerdict::Equivalent(lift(vertices, f, g, &dom_chain, &cod.chain, &core_path))
        }
        PathSearch::Separate(s) => PieceVerdict::NotEquivalent(s),
        PathSearch::Exhausted(s) => PieceVerdict::Unknown(s),
    }
}

/// Expands a chain between reduced maps into a chain between `f` and `g` on
/// the points `pts`:
/// `f∘rho_j`, then `kappa_j∘f∘r`, then `h∘r` for the reduced chain `h`, then
/// the same segments for `g` in reverse. `core_path` entries are full tables
/// whose values matter on the image of `r = rho_last`.
pub(crate) fn lift(
    pts: &[u32],
    f: &[u32],
    g: &[u32],
    dom_chain: &[Vec<u32>],
    cod_chain: &[Vec<u32>],
    core_path: &[Vec<u32>],
) -> Vec<Vec<u32>> {
    let r = dom_chain.last().unwrap();
    let mut seq: Vec<Vec<u32>> = Vec::new();
    let mut push = |m: Vec<u32>| {
        if seq.last() != Some(&m) {
            seq.push(m);
        }
    };
    for rho in dom_chain {
        push(pts.iter().map(|&x| f[rho[x as usize] as usize]).collect());
    }
    for kappa in &cod_chain[1..] {
        push(pts.iter().map(|&x| kappa[f[r[x as usize] as usize] as usize]).collect());
    }
    for h in core_path {
        push(pts.iter().map(|&x| h[r[x as usize] as usize]).collect());
    }
    for kappa in cod_chain[1..].iter().rev() {
        push(pts.iter().map(|&x| kappa[g[r[x as usize] as usize] as usize]).collect());
    }
    for rho in dom_chain.iter().rev() {
        push(pts.iter().map(|&x| g[rho[x as usize] as usize]).collect());
    }
    seq
}

pub(crate) fn limits_for(opts: &SearchOptions, started: Instant) -> Limits {
    Limits {
        max_states: opts.budget.max_bfs_states,
        deadline: opts.budget.time_limit.map(|t| started + t),
    }
}

pub(crate) fn to_maps(
    domain: &Arc<SimplicialComplex>,
    codomain: &Arc<SimplicialComplex>,
    tables: Vec<Vec<u32>>,
) -> ContiguitySequence {
    ContiguitySequence {
        steps: tables
            .into_iter()
            .map(|t| SimplicialMap::from_images_unchecked(domain.clone(), codomain.clone(), t))
            .collect(),
    }
}

/// Decides whether `f` and `g` lie in one contiguity class. A returned
/// sequence is shortest among chains between the core-reduced maps.
pub fn same_contiguity_class(
    f: &SimplicialMap,
    g: &SimplicialMap,
    opts: &SearchOptions,
) -> Result<ClassVerdict> {
    check_shared(f, g)?;
    let cod = CodomainCtx::new(f.codomain(), opts.reduce_cores)?;
    let dom = f.domain();
    let n = dom.vertex_count();
    let vertices: Vec<u32> = (0..n as u32).collect();
    let limits = limits_for(opts, Instant::now());
    Ok(
        match piece_class(&cod, n, &vertices, dom.facets(), f.images(), g.images(), opts.reduce_cores, limits) {
            PieceVerdict::Equivalent(path) => {
                ClassVerdict::Equivalent(to_maps(dom, f.codomain(), path))
            }
            PieceVerdict::NotEquivalent(s) => ClassVerdict::NotEquivalent { states_exhausted: s },
            PieceVerdict::Unknown(_) => ClassVerdict::Unknown {
                budget: opts.budget.max_bfs_states,
            },
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(f: &[&[&str]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_tokens(f).unwrap())
    }

    fn check(f: &SimplicialMap, g: &SimplicialMap, reduce: bool) -> ClassVerdict {
        let opts = SearchOptions {
            reduce_cores: reduce,
            ..SearchOptions::default()
        };
        same_contiguity_class(f, g, &opts).unwrap()
    }

    #[test]
    fn contiguity_basics() {
        let l = k(&[&["v0", "v1"], &["v1", "v2"], &["v1", "v3"], &["v2", "v3"]]);
        let id = SimplicialMap::identity(&l);
        let c = SimplicialMap::constant(&l, &l, &"v1".into()).unwrap();
        assert!(contiguous(&id, &id).unwrap());
        assert!(!contiguous(&id, &c).unwrap());
        let s = k(&[&["a", "b", "c"]]);
        let ids = SimplicialMap::identity(&s);
        let cs = SimplicialMap::constant(&s, &s, &"c".into()).unwrap();
        assert!(contiguous(&ids, &cs).unwrap());
        let other = k(&[&["x"]]);
        let cx = SimplicialMap::constant(&l, &other, &"x".into()).unwrap();
        assert!(matches!(contiguous(&id, &cx), Err(Error::DomainMismatch)));
    }

    #[test]
    fn class_examples() {
        let s = k(&[&["a", "b", "c"]]);
        let ids = SimplicialMap::identity(&s);
        let cs = SimplicialMap::constant(&s, &s, &"a".into()).unwrap();
        for reduce in [false, true] {
            match check(&ids, &ids, reduce) {
                ClassVerdict::Equivalent(seq) => assert_eq!(seq.step_count(), 0),
                v => panic!("{v:?}"),
            }
            match check(&ids, &cs, reduce) {
                ClassVerdict::Equivalent(seq) => {
                    assert!(seq.verify());
                    assert_eq!(seq.first(), &ids);
                    assert_eq!(seq.last(), &cs);
                    if !reduce {
                        assert_eq!(seq.step_count(), 1);
                    }
                }
                v => panic!("{v:?}"),
            }
        }
        let c3 = k(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
        let id3 = SimplicialMap::identity(&c3);
        let c = SimplicialMap::constant(&c3, &c3, &"a".into()).unwrap();
        for reduce in [false, true] {
            assert!(matches!(check(&id3, &c, reduce), ClassVerdict::NotEquivalent { .. }));
        }
    }

    #[test]
    fn reduced_chain_on_whiskered_cycle() {
        let l = k(&[&["v0", "v1"], &["v1", "v2"], &["v1", "v3"], &["v2", "v3"]]);
        let id = SimplicialMap::identity(&l);
        let r = SimplicialMap::from_images(l.clone(), l.clone(), vec![1, 1, 2, 3]).unwrap();
        match check(&id, &r, true) {
            ClassVerdict::Equivalent(seq) => {
                assert!(seq.verify());
                assert_eq!(seq.first(), &id);
                assert_eq!(seq.last(), &r);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn unknown_when_budget_tiny() {
        let s = k(&[&["a", "b", "c", "d"]]);
        let path = k(&[&["x0", "x1"], &["x1", "x2"], &["x2", "x3"], &["x3", "x4"], &["x4", "x5"]]);
        let f = SimplicialMap::constant(&s, &path, &"x0".into()).unwrap();
        let g = SimplicialMap::constant(&s, &path, &"x5".into()).unwrap();
        let opts = SearchOptions {
            reduce_cores: false,
            budget: crate::SearchBudget {
                max_bfs_states: 3,
                ..Default::default()
            },
            ..SearchOptions::default()
        };
        assert!(matches!(
            same_contiguity_class(&f, &g, &opts).unwrap(),
            ClassVerdict::Unknown { .. }
        ));
    }
}
