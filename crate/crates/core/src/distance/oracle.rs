//! Brute-force reference for [`super::sd`]: no core reduction, no shared
//! search code. Assignments of facets to blocks are enumerated as
//! restricted growth strings; each block is checked by a plain BFS over
//! simplicial maps on the unreduced piece, moving one vertex at a time.

use std::collections::{HashMap, HashSet};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::map::SimplicialMap;

use super::check_tuple;

pub const ORACLE_FACET_LIMIT: usize = 16;

/// Least number of pieces minus one over covers with at most `size_bound`
/// pieces, or `None` when no such cover exists.
pub fn sd_oracle(maps: &[SimplicialMap], size_bound: usize) -> Result<Option<usize>> {
    check_tuple(maps)?;
    let dom = maps[0].domain();
    let nf = dom.facet_count();
    if nf > ORACLE_FACET_LIMIT {
        return Err(Error::OracleTooLarge {
            facets: nf,
            limit: ORACLE_FACET_LIMIT,
        });
    }
    let mut search = Oracle {
        dom,
        cod: maps[0].codomain(),
        maps: maps.iter().map(|m| m.images()).collect(),
        memo: HashMap::new(),
    };
    for bound in 1..=size_bound.min(nf) {
        let mut blocks = Vec::new();
        if search.assign(0, bound, &mut blocks) {
            return Ok(Some(bound - 1));
        }
    }
    Ok(None)
}

struct Oracle<'a> {
    dom: &'a SimplicialComplex,
    cod: &'a SimplicialComplex,
    maps: Vec<&'a [u32]>,
    memo: HashMap<u32, bool>,
}

impl Oracle<'_> {
    fn assign(&mut self, facet: usize, bound: usize, blocks: &mut Vec<u32>) -> bool {
        if facet == self.dom.facet_count() {
            return true;
        }
        let bit = 1u32 << facet;
        for j in 0..blocks.len() {
            let grown = blocks[j] | bit;
            if self.block_ok(grown) {
                let old = std::mem::replace(&mut blocks[j], grown);
                if self.assign(facet + 1, bound, blocks) {
                    return true;
                }
                blocks[j] = old;
            }
        }
        if blocks.len() < bound && self.block_ok(bit) {
            blocks.push(bit);
            if self.assign(facet + 1, bound, blocks) {
                return true;
            }
            blocks.pop();
        }
        false
    }

    /// Each connected component of the block is checked on its own;
    /// contiguity is a condition on single facets, so chains combine.
    fn block_ok(&mut self, mask: u32) -> bool {
        self.components(mask).into_iter().all(|c| self.component_ok(c))
    }

    fn components(&self, mask: u32) -> Vec<u32> {
        let facets = self.dom.facets();
        let meets = |a: usize, b: usize| facets[a].iter().any(|v| facets[b].contains(v));
        let mut left = mask;
        let mut out = Vec::new();
        while left != 0 {
            let mut comp = left & left.wrapping_neg();
            loop {
                let grown = (0..facets.len())
                    .filter(|&b| left >> b & 1 == 1)
                    .filter(|&b| (0..facets.len()).any(|a| comp >> a & 1 == 1 && meets(a, b)))
                    .fold(comp, |m, b| m | 1 << b);
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            left &= !comp;
            out.push(comp);
        }
        out
    }

    fn component_ok(&mut self, mask: u32) -> bool {
        if let Some(&v) = self.memo.get(&mask) {
            return v;
        }
        let v = (1..self.maps.len()).all(|i| self.same_class(mask, self.maps[0], self.maps[i]));
        self.memo.insert(mask, v);
        v
    }

    /// Breadth-first search from both ends, always growing the smaller
    /// frontier; an emptied frontier means its whole class was seen.
    fn same_class(&self, mask: u32, f: &[u32], g: &[u32]) -> bool {
        let facets: Vec<&Vec<u32>> = (0..self.dom.facet_count())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &self.dom.facets()[i])
            .collect();
        let mut verts: Vec<u32> = facets.iter().flat_map(|f| f.iter().copied()).collect();
        verts.sort_unstable();
        verts.dedup();
        let mut star: Vec<Vec<Vec<usize>>> = vec![Vec::new(); verts.len()];
        for f in &facets {
            let local: Vec<usize> = f.iter().map(|v| verts.binary_search(v).unwrap()).collect();
            for &x in &local {
                star[x].push(local.clone());
            }
        }
        let start: Vec<u32> = verts.iter().map(|&v| f[v as usize]).collect();
        let goal: Vec<u32> = verts.iter().map(|&v| g[v as usize]).collect();
        if start == goal {
            return true;
        }
        let mut sides = [
            (HashSet::from([start.clone()]), vec![start]),
            (HashSet::from([goal.clone()]), vec![goal]),
        ];
        loop {
            let s = if sides[0].1.len() <= sides[1].1.len() { 0 } else { 1 };
            if sides[s].1.is_empty() {
                return false;
            }
            let frontier = std::mem::take(&mut sides[s].1);
            let mut next = Vec::new();
            for h in frontier {
                for x in 0..h.len() {
                    for w in 0..self.cod.vertex_count() as u32 {
                        if w == h[x] || !self.movable(&star[x], &h, w) {
                            continue;
                        }
                        let mut k = h.clone();
                        k[x] = w;
                        if sides[1 - s].0.contains(&k) {
                            return true;
                        }
                        if sides[s].0.insert(k.clone()) {
                            next.push(k);
                        }
                    }
                }
            }
            sides[s].1 = next;
        }
    }

    /// Whether moving one vertex to `w` keeps every facet through it, old
    /// and new images together, on a simplex. Such moves are contiguities,
    /// and they generate the classes: between contiguous `h` and `k`,
    /// switching vertices from `h` to `k` one at a time stays inside the
    /// simplices `h(σ) ∪ k(σ)`.
    fn movable(&self, star: &[Vec<usize>], h: &[u32], w: u32) -> bool {
        star.iter().all(|f| {
            let mut s: Vec<u32> = f.iter().map(|&y| h[y]).collect();
            s.push(w);
            s.sort_unstable();
            s.dedup();
            self.cod.contains_ids(&s)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn k(f: &[&[&str]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_tokens(f).unwrap())
    }

    #[test]
    fn small_values() {
        let c3 = k(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
        let id = SimplicialMap::identity(&c3);
        let c = SimplicialMap::constant(&c3, &c3, &"a".into()).unwrap();
        assert_eq!(sd_oracle(&[id.clone(), id.clone()], 3).unwrap(), Some(0));
        assert_eq!(sd_oracle(&[id.clone(), c.clone()], 3).unwrap(), Some(1));
        assert_eq!(sd_oracle(&[id, c], 1).unwrap(), None);

        let s = k(&[&["a", "b", "c"]]);
        let ids = SimplicialMap::identity(&s);
        let cs = SimplicialMap::constant(&s, &s, &"b".into()).unwrap();
        assert_eq!(sd_oracle(&[ids, cs], 2).unwrap(), Some(0));
    }
}
