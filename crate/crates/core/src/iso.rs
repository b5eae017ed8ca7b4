//! Isomorphism testing by backtracking over sorted vertices.

use rustc_hash::FxHashSet;

use crate::complex::{SimplicialComplex, VertexId};
use crate::label::VertexLabel;

/// Sorted sizes of the facets through each vertex; preserved by isomorphisms.
fn signatures(k: &SimplicialComplex) -> Vec<Vec<usize>> {
    (0..k.vertex_count() as VertexId)
        .map(|v| {
            let mut s: Vec<usize> = k
                .incident_facets(v)
                .iter()
                .map(|&f| k.facets()[f as usize].len())
                .collect();
            s.sort_unstable();
            s
        })
        .collect()
}

/// First isomorphism in backtracking order (vertices of `a` in label order,
/// candidates in label order), as an image table indexed by `a`'s vertex ids.
pub(crate) fn find_isomorphism(a: &SimplicialComplex, b: &SimplicialComplex) -> Option<Vec<VertexId>> {
    isomorphisms(a, b, 1).pop()
}

fn isomorphisms(a: &SimplicialComplex, b: &SimplicialComplex, cap: usize) -> Vec<Vec<VertexId>> {
    if a.vertex_count() != b.vertex_count() || a.facet_count() != b.facet_count() {
        return Vec::new();
    }
    let sa = signatures(a);
    let sb = signatures(b);
    let mut ms = sa.clone();
    let mut mb = sb.clone();
    ms.sort();
    mb.sort();
    if ms != mb {
        return Vec::new();
    }
    let target_facets: FxHashSet<Vec<VertexId>> = b.facets().iter().cloned().collect();
    // Facets that become fully assigned when their largest vertex is placed.
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); a.vertex_count()];
    for (i, f) in a.facets().iter().enumerate() {
        closing[*f.last().unwrap() as usize].push(i);
    }
    let mut state = Search {
        a,
        b,
        sa: &sa,
        sb: &sb,
        target_facets: &target_facets,
        closing: &closing,
        image: vec![u32::MAX; a.vertex_count()],
        used: vec![false; b.vertex_count()],
        found: Vec::new(),
        cap,
    };
    state.extend(0);
    state.found
}

struct Search<'a> {
    a: &'a SimplicialComplex,
    b: &'a SimplicialComplex,
    sa: &'a [Vec<usize>],
    sb: &'a [Vec<usize>],
    target_facets: &'a FxHashSet<Vec<VertexId>>,
    closing: &'a [Vec<usize>],
    image: Vec<VertexId>,
    used: Vec<bool>,
    found: Vec<Vec<VertexId>>,
    cap: usize,
}

impl Search<'_> {
    fn consistent(&self, v: usize) -> bool {
        for &fi in self.a.incident_facets(v as VertexId) {
            let partial: Vec<VertexId> = self.a.facets()[fi as usize]
                .iter()
                .filter(|&&u| u as usize <= v)
                .map(|&u| self.image[u as usize])
                .collect();
            if !self.b.contains_ids(&partial) {
                return false;
            }
        }
        for &fi in &self.closing[v] {
            let mut img: Vec<VertexId> = self.a.facets()[fi]
                .iter()
                .map(|&u| self.image[u as usize])
                .collect();
            img.sort_unstable();
            if !self.target_facets.contains(&img) {
                return false;
            }
        }
        true
    }

    /// True once `cap` isomorphisms are collected.
    fn extend(&mut self, v: usize) -> bool {
        if v == self.a.vertex_count() {
            self.found.push(self.image.clone());
            return self.found.len() >= self.cap;
        }
        for t in 0..self.b.vertex_count() {
            if self.used[t] || self.sa[v] != self.sb[t] {
                continue;
            }
            self.image[v] = t as VertexId;
            self.used[t] = true;
            if self.consistent(v) && self.extend(v + 1) {
                self.used[t] = false;
                return true;
            }
            self.used[t] = false;
        }
        self.image[v] = u32::MAX;
        false
    }
}

/// A vertex bijection carrying facets onto facets in both directions, if one
/// exists.
pub fn are_isomorphic(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
) -> Option<Vec<(VertexLabel, VertexLabel)>> {
    find_isomorphism(a, b).map(|img| {
        img.iter()
            .enumerate()
            .map(|(v, &w)| (a.label(v as VertexId).clone(), b.label(w).clone()))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(f: &[&[&str]]) -> SimplicialComplex {
        SimplicialComplex::from_tokens(f).unwrap()
    }

    #[test]
    fn identity_on_self() {
        let l = k(&[&["v0", "v1"], &["v1", "v2"], &["v1", "v3"], &["v2", "v3"]]);
        let iso = find_isomorphism(&l, &l).unwrap();
        assert_eq!(iso, vec![0, 1, 2, 3]);
    }

    #[test]
    fn fig1_pair() {
        let l = k(&[&["v0", "v1"], &["v1", "v2"], &["v1", "v3"], &["v2", "v3"]]);
        let lp = k(&[&["w0", "w2"], &["w1", "w2"], &["w1", "w3"], &["w2", "w3"]]);
        let iso = are_isomorphic(&l, &lp).unwrap();
        // v0 must go to the pendant vertex w0 and v1 to the degree-3 vertex w2.
        assert_eq!(iso[0], ("v0".into(), "w0".into()));
        assert_eq!(iso[1], ("v1".into(), "w2".into()));
        assert!(are_isomorphic(&lp, &l).is_some());
    }

    #[test]
    fn edge_vs_two_points() {
        let e = k(&[&["a", "b"]]);
        let two = k(&[&["a"], &["b"]]);
        assert!(are_isomorphic(&e, &two).is_none());
        assert!(are_isomorphic(&two, &e).is_none());
    }

    #[test]
    fn cycles_of_different_length() {
        let c4 = k(&[&["a", "b"], &["b", "c"], &["c", "d"], &["a", "d"]]);
        let path = k(&[&["a", "b"], &["b", "c"], &["c", "d"], &["d", "e"]]);
        assert!(are_isomorphic(&c4, &path).is_none());
    }
}
