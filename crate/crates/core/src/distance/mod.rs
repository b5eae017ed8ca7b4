//! Contiguity distance of a tuple of maps with a shared domain and codomain.
//!
//! `sd(φ_1, ..., φ_m)` is the least `n` such that the domain is covered by
//! subcomplexes `L_0, ..., L_n` on each of which all restrictions lie in one
//! contiguity class.
//!
//! Only covers by facet sets are searched. This loses nothing: given any
//! cover by subcomplexes, each facet lies in some `L_k`, the subcomplex it
//! generates lies in `L_k` too, and the class condition survives restriction.
//! So the facet sets `{σ : σ ⊆ L_k}` form an admissible cover of the same
//! size. Admissibility is downward closed for the same reason, which is what
//! the cover search relies on.
//!
//! With core reduction on, the search runs over the facets of the domain's
//! core. A cover `S_k` there pulls back to `P_k = {σ : r(σ) ⊆ τ for some
//! τ ∈ S_k}`, where `r` is the core retraction. On `P_k` each `φ_i` is
//! contiguous in steps to `φ_i ∘ r`, so the pulled back cover is admissible,
//! and restricting a cover of the domain to the core shows the two minima
//! agree.

mod cert;
mod cover;
mod oracle;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::collapse::collapse_complex;
use crate::complex::Simplex;
use crate::contiguity::{
    check_shared, lift, limits_for, piece_class, to_maps, CodomainCtx, ContiguitySequence,
    PieceVerdict,
};
use crate::engine::Limits;
use crate::error::{Error, Result};
use crate::map::SimplicialMap;
use crate::SearchOptions;

pub use cert::{certificate_defect, verify_certificate, CertificateDefect};
pub use cover::{CoverStrategy, MAXIMAL_SET_LIMIT};
pub use oracle::{sd_oracle, ORACLE_FACET_LIMIT};

use cover::{min_cover, Admissible, FacetSet};

/// A cover of the domain by facet sets together with, for each piece and
/// each consecutive pair `(φ_i, φ_{i+1})`, a contiguity chain between their
/// restrictions to the subcomplex the piece generates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdCertificate {
    pub pieces: Vec<Vec<Simplex>>,
    /// `witnesses[k][i]` runs from `φ_i|P_k` to `φ_{i+1}|P_k`.
    pub witnesses: Vec<Vec<ContiguitySequence>>,
    /// Pieces minus one.
    pub value: usize,
}

impl SdCertificate {
    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdStats {
    pub domain_facets: usize,
    /// Facets of the complex the cover search ran on.
    pub searched_facets: usize,
    pub candidates_evaluated: usize,
    pub strategy: CoverStrategy,
}

#[derive(Clone, Debug)]
pub struct SdOutcome {
    pub value: usize,
    pub pieces: usize,
    pub certificate: SdCertificate,
    pub stats: SdStats,
}

pub(crate) fn check_tuple(maps: &[SimplicialMap]) -> Result<()> {
    if maps.len() < 2 {
        return Err(Error::TooFewMaps);
    }
    for m in &maps[1..] {
        check_shared(&maps[0], m)?;
    }
    Ok(())
}

struct Problem<'a> {
    cod: &'a CodomainCtx,
    n: usize,
    facets: Vec<Vec<u32>>,
    maps: Vec<&'a [u32]>,
    reduce: bool,
    limits: Limits,
    max_candidates: usize,
    memo: Mutex<FxHashMap<FacetSet, bool>>,
    evaluated: AtomicUsize,
}

impl Problem<'_> {
    /// Splits a facet set into classes of facets linked by shared vertices.
    fn components(&self, set: &FacetSet) -> Vec<FacetSet> {
        let mut left: Vec<usize> = set.ones().collect();
        let mut out = Vec::new();
        while let Some(seed) = left.pop() {
            let mut part = FacetSet::with_capacity(set.len());
            part.insert(seed);
            let mut stack = vec![seed];
            while let Some(a) = stack.pop() {
                left.retain(|&b| {
                    let linked = self.touches(a, b);
                    if linked {
                        part.insert(b);
                        stack.push(b);
                    }
                    !linked
                });
            }
            out.push(part);
        }
        out
    }

    fn component_admissible(&self, set: &FacetSet) -> Result<bool> {
        if let Some(&v) = self.memo.lock().unwrap().get(set) {
            return Ok(v);
        }
        if self.evaluated.fetch_add(1, Ordering::Relaxed) >= self.max_candidates {
            return Err(Error::BudgetExhausted(format!(
                "more than {} candidate pieces",
                self.max_candidates
            )));
        }
        let v = self.chains(set)?.is_some();
        self.memo.lock().unwrap().insert(set.clone(), v);
        Ok(v)
    }

    fn piece(&self, set: &FacetSet) -> (Vec<u32>, Vec<Vec<u32>>) {
        let facets: Vec<Vec<u32>> = set.ones().map(|i| self.facets[i].clone()).collect();
        let mut vertices: Vec<u32> = facets.iter().flatten().copied().collect();
        vertices.sort_unstable();
        vertices.dedup();
        (vertices, facets)
    }

    /// Chains from `φ_0` to each later map on the piece, over the piece's
    /// vertices; `None` when some map is in another class.
    fn chains(&self, set: &FacetSet) -> Result<Option<Vec<Vec<Vec<u32>>>>> {
        let (vertices, facets) = self.piece(set);
        let mut out = Vec::with_capacity(self.maps.len() - 1);
        for g in &self.maps[1..] {
            match piece_class(self.cod, self.n, &vertices, &facets, self.maps[0], g, self.reduce, self.limits) {
                PieceVerdict::Equivalent(path) => out.push(path),
                PieceVerdict::NotEquivalent(_) => return Ok(None),
                PieceVerdict::Unknown(states) => {
                    return Err(Error::BudgetExhausted(format!(
                        "class search stopped after {states} states"
                    )))
                }
            }
        }
        Ok(Some(out))
    }
}

impl Admissible for Problem<'_> {
    fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Checked one connected component at a time: contiguity is a
    /// condition on single simplices, so chains on the components combine.
    fn admissible(&self, set: &FacetSet) -> Result<bool> {
        for part in self.components(set) {
            if !self.component_admissible(&part)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn touches(&self, a: usize, b: usize) -> bool {
        self.facets[a].iter().any(|v| self.facets[b].binary_search(v).is_ok())
    }
}

/// Exact contiguity distance with a certificate. Errors with
/// [`Error::BudgetExhausted`] rather than answering under uncertainty, and
/// with [`Error::NoCover`] when some facet already separates two maps.
pub fn sd(maps: &[SimplicialMap], opts: &SearchOptions) -> Result<SdOutcome> {
    check_tuple(maps)?;
    let started = Instant::now();
    let dom = maps[0].domain();
    let codomain = maps[0].codomain();
    let n = dom.vertex_count();
    let reduce = opts.reduce_cores;
    let cod = CodomainCtx::new(codomain, reduce)?;
    let (facets, dom_chain) = if reduce {
        let c = collapse_complex(dom);
        let chain = c.chain(n);
        (c.facets, chain)
    } else {
        (dom.facets().to_vec(), vec![(0..n as u32).collect()])
    };
    let images: Vec<&[u32]> = maps.iter().map(|m| m.images()).collect();
    let problem = Problem {
        cod: &cod,
        n,
        facets,
        maps: images,
        reduce,
        limits: limits_for(opts, started),
        max_candidates: opts.budget.max_piece_candidates,
        memo: Mutex::new(FxHashMap::default()),
        evaluated: AtomicUsize::new(0),
    };
    let cover = match min_cover(&problem, opts.cover) {
        Err(Error::NoCover(i)) => {
            let i: usize = i.parse().unwrap();
            let s = Simplex::from_ids(dom, &problem.facets[i]);
            return Err(Error::NoCover(s.to_string()));
        }
        other => other?,
    };
    let r = dom_chain.last().unwrap();
    let mut pieces = Vec::with_capacity(cover.pieces.len());
    let mut witnesses = Vec::with_capacity(cover.pieces.len());
    for set in &cover.pieces {
        // pull back to the facets of the full domain
        let targets: Vec<&Vec<u32>> = set.ones().map(|i| &problem.facets[i]).collect();
        let members: Vec<usize> = dom
            .facets()
            .iter()
            .enumerate()
            .filter(|(_, s)| {
                targets
                    .iter()
                    .any(|t| s.iter().all(|&v| t.binary_search(&r[v as usize]).is_ok()))
            })
            .map(|(i, _)| i)
            .collect();
        let (sub, parents) = dom.sub_by_facets(&members);
        let sub = Arc::new(sub);
        let (vertices, _) = problem.piece(set);
        let chains = problem
            .chains(set)?
            .expect("cover pieces are admissible");
        let scatter = |local: &Vec<u32>| {
            let mut full = vec![0u32; n];
            for (&x, &y) in vertices.iter().zip(local) {
                full[x as usize] = y;
            }
            full
        };
        let mut per_pair = Vec::with_capacity(maps.len() - 1);
        for i in 0..maps.len() - 1 {
            let mut path: Vec<Vec<u32>> = Vec::new();
            if i > 0 {
                path.extend(chains[i - 1].iter().rev().cloned());
            }
            for step in &chains[i] {
                if path.last() != Some(step) {
                    path.push(step.clone());
                }
            }
            let full: Vec<Vec<u32>> = path.iter().map(scatter).collect();
            let tables = lift(
                &parents,
                maps[i].images(),
                maps[i + 1].images(),
                &dom_chain,
                &[(0..codomain.vertex_count() as u32).collect()],
                &full,
            );
            per_pair.push(to_maps(&sub, codomain, tables));
        }
        pieces.push(members.iter().map(|&i| dom.facet_simplex(i)).collect());
        witnesses.push(per_pair);
    }
    let count = pieces.len();
    Ok(SdOutcome {
        value: count - 1,
        pieces: count,
        certificate: SdCertificate {
            pieces,
            witnesses,
            value: count - 1,
        },
        stats: SdStats {
            domain_facets: dom.facet_count(),
            searched_facets: problem.facets.len(),
            candidates_evaluated: problem.evaluated.load(Ordering::Relaxed),
            strategy: cover.strategy,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;

    fn k(f: &[&[&str]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_tokens(f).unwrap())
    }

    fn cycle3() -> Arc<SimplicialComplex> {
        k(&[&["a", "b"], &["b", "c"], &["a", "c"]])
    }

    fn all_opts() -> Vec<SearchOptions> {
        let mut out = Vec::new();
        for reduce in [true, false] {
            for cover in [CoverStrategy::MaximalSets, CoverStrategy::Nogoods] {
                out.push(SearchOptions {
                    reduce_cores: reduce,
                    cover,
                    ..SearchOptions::default()
                });
            }
        }
        out
    }

    #[test]
    fn identity_vs_constant_on_cycle() {
        let c3 = cycle3();
        let id = SimplicialMap::identity(&c3);
        let c = SimplicialMap::constant(&c3, &c3, &"a".into()).unwrap();
        for opts in all_opts() {
            let out = sd(&[id.clone(), c.clone()], &opts).unwrap();
            assert_eq!(out.value, 1);
            assert_eq!(out.pieces, 2);
            let sizes: Vec<usize> = out.certificate.pieces.iter().map(|p| p.len()).collect();
            let mut sorted = sizes.clone();
            sorted.sort();
            assert_eq!(sorted, vec![1, 2]);
            assert!(verify_certificate(&out.certificate, &[id.clone(), c.clone()]));
        }
    }

    #[test]
    fn same_map_is_zero() {
        let c3 = cycle3();
        let id = SimplicialMap::identity(&c3);
        let out = sd(&[id.clone(), id.clone()], &SearchOptions::default()).unwrap();
        assert_eq!(out.value, 0);
        assert_eq!(out.certificate.pieces[0].len(), 3);
    }

    #[test]
    fn collapsible_domain_is_zero() {
        let s = k(&[&["a", "b", "c"]]);
        let c3 = cycle3();
        let f = SimplicialMap::new(s.clone(), c3.clone(), &[("a".into(), "a".into()), ("b".into(), "b".into()), ("c".into(), "b".into())]).unwrap();
        let g = SimplicialMap::constant(&s, &c3, &"c".into()).unwrap();
        let out = sd(&[f.clone(), g.clone()], &SearchOptions::default()).unwrap();
        assert_eq!(out.value, 0);
        assert!(verify_certificate(&out.certificate, &[f, g]));
    }

    #[test]
    fn whiskered_cycle_certificate_lifts() {
        let l = k(&[&["v0", "v1"], &["v1", "v2"], &["v1", "v3"], &["v2", "v3"]]);
        let id = SimplicialMap::identity(&l);
        let c = SimplicialMap::constant(&l, &l, &"v0".into()).unwrap();
        for opts in all_opts() {
            let out = sd(&[id.clone(), c.clone()], &opts).unwrap();
            assert_eq!(out.value, 1);
            assert!(verify_certificate(&out.certificate, &[id.clone(), c.clone()]));
        }
    }

    #[test]
    fn disconnected_images_have_no_cover() {
        let two = k(&[&["p"], &["q"]]);
        let pt = k(&[&["x"]]);
        let f = SimplicialMap::constant(&pt, &two, &"p".into()).unwrap();
        let g = SimplicialMap::constant(&pt, &two, &"q".into()).unwrap();
        assert!(matches!(sd(&[f, g], &SearchOptions::default()), Err(Error::NoCover(_))));
    }

    #[test]
    fn rejects_single_map() {
        let c3 = cycle3();
        let id = SimplicialMap::identity(&c3);
        assert!(matches!(sd(&[id], &SearchOptions::default()), Err(Error::TooFewMaps)));
    }
}
