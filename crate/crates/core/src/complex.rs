//! Finite simplicial complexes stored by their facets.
//!
//! A complex is a sorted vertex table plus the antichain of maximal simplices.
//! A vertex set is a simplex iff it is a nonempty subset of some facet, so
//! downward closure never has to be materialized. Vertex ids are ranks in the
//! sorted label table, which makes every derived ordering agree with the
//! label ordering.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::label::VertexLabel;

/// Index of a vertex in a complex's sorted label table.
pub type VertexId = u32;

/// A nonempty, duplicate-free, sorted set of vertex labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<VertexLabel>);

impl Simplex {
    pub fn new(vertices: impl IntoIterator<Item = VertexLabel>) -> Result<Self> {
        let mut v: Vec<VertexLabel> = vertices.into_iter().collect();
        v.sort();
        v.dedup();
        if v.is_empty() {
            return Err(Error::EmptyInput("simplex"));
        }
        Ok(Simplex(v))
    }

    /// Convenience constructor from string tokens; panics on invalid labels.
    pub fn of(tokens: &[&str]) -> Self {
        Simplex::new(tokens.iter().map(|t| VertexLabel::from(*t))).expect("nonempty simplex")
    }

    pub(crate) fn from_ids(k: &SimplicialComplex, ids: &[VertexId]) -> Self {
        let mut v: Vec<VertexLabel> = ids.iter().map(|&i| k.label(i).clone()).collect();
        v.sort();
        Simplex(v)
    }

    pub fn vertices(&self) -> &[VertexLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone)]
pub struct SimplicialComplex {
    labels: Vec<VertexLabel>,
    facets: Vec<Vec<VertexId>>,
    facet_bits: Vec<FixedBitSet>,
    incidence: Vec<Vec<u32>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for i in 0..self.facet_count() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", self.facet_simplex(i))?;
        }
        f.write_str("}")
    }
}

impl SimplicialComplex {
    /// Builds a complex from a list of vertex collections. Duplicates inside
    /// entries and entries contained in other entries are dropped.
    pub fn build(facet_list: Vec<Vec<VertexLabel>>) -> Result<Self> {
        if facet_list.is_empty() {
            return Err(Error::EmptyInput("facet list"));
        }
        if facet_list.iter().any(|f| f.is_empty()) {
            return Err(Error::EmptyInput("facet"));
        }
        let labels: Vec<VertexLabel> = facet_list
            .iter()
            .flatten()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let facets = facet_list
            .iter()
            .map(|f| {
                f.iter()
                    .map(|l| labels.binary_search(l).unwrap() as VertexId)
                    .collect()
            })
            .collect();
        Ok(Self::from_parts(labels, facets))
    }

    /// Parses each token as a [`VertexLabel`].
    pub fn from_tokens(facet_list: &[&[&str]]) -> Result<Self> {
        let facets = facet_list
            .iter()
            .map(|f| f.iter().map(|t| t.parse()).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::build(facets)
    }

    /// `labels` must be sorted and every label must occur in some facet.
    pub(crate) fn from_parts(labels: Vec<VertexLabel>, facets: Vec<Vec<VertexId>>) -> Self {
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
        let n = labels.len();
        let mut facets: Vec<Vec<VertexId>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        facets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        facets.dedup();
        let mut kept: Vec<Vec<VertexId>> = Vec::with_capacity(facets.len());
        let mut kept_bits: Vec<FixedBitSet> = Vec::with_capacity(facets.len());
        for f in facets {
            let bits = to_bits(n, &f);
            if kept_bits.iter().any(|k| bits.is_subset(k)) {
                continue;
            }
            kept.push(f);
            kept_bits.push(bits);
        }
        let mut order: Vec<usize> = (0..kept.len()).collect();
        order.sort_by(|&a, &b| kept[a].cmp(&kept[b]));
        let facets: Vec<Vec<VertexId>> = order.iter().map(|&i| kept[i].clone()).collect();
        let facet_bits: Vec<FixedBitSet> = order.iter().map(|&i| kept_bits[i].clone()).collect();
        let mut incidence = vec![Vec::new(); n];
        for (i, f) in facets.iter().enumerate() {
            for &v in f {
                incidence[v as usize].push(i as u32);
            }
        }
        debug_assert!(incidence.iter().all(|inc| !inc.is_empty()));
        SimplicialComplex {
            labels,
            facets,
            facet_bits,
            incidence,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn dimension(&self) -> usize {
        self.facets.iter().map(|f| f.len()).max().unwrap_or(1) - 1
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &VertexLabel {
        &self.labels[v as usize]
    }

    pub fn id_of(&self, label: &VertexLabel) -> Option<VertexId> {
        self.labels.binary_search(label).ok().map(|i| i as VertexId)
    }

    pub fn facets(&self) -> &[Vec<VertexId>] {
        &self.facets
    }

    pub(crate) fn facet_bits(&self) -> &[FixedBitSet] {
        &self.facet_bits
    }

    /// Facets containing `v`, as indices into [`Self::facets`].
    pub fn incident_facets(&self, v: VertexId) -> &[u32] {
        &self.incidence[v as usize]
    }

    pub fn facet_simplex(&self, i: usize) -> Simplex {
        Simplex(self.facets[i].iter().map(|&v| self.label(v).clone()).collect())
    }

    pub fn facet_simplices(&self) -> Vec<Simplex> {
        (0..self.facet_count()).map(|i| self.facet_simplex(i)).collect()
    }

    pub fn ids_of(&self, s: &Simplex) -> Option<Vec<VertexId>> {
        s.vertices().iter().map(|l| self.id_of(l)).collect()
    }

    /// True iff the id set is contained in some facet.
    pub fn contains_ids(&self, ids: &[VertexId]) -> bool {
        let Some(&first) = ids.first() else {
            return false;
        };
        self.incidence[first as usize].iter().any(|&fi| {
            let bits = &self.facet_bits[fi as usize];
            ids.iter().all(|&v| bits.contains(v as usize))
        })
    }

    pub fn has_simplex(&self, s: &Simplex) -> bool {
        match self.ids_of(s) {
            Some(ids) => self.contains_ids(&ids),
            None => false,
        }
    }

    /// Graph connectivity of the 1-skeleton.
    pub fn is_edge_path_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for f in &self.facets {
            let a = find(&mut parent, f[0] as usize);
            for &v in &f[1..] {
                let b = find(&mut parent, v as usize);
                parent[b] = a;
            }
        }
        let root = find(&mut parent, 0);
        (0..n).all(|v| find(&mut parent, v) == root)
    }

    /// Connected component index of every vertex (components numbered by
    /// their least vertex).
    pub fn components(&self) -> Vec<u32> {
        let n = self.vertex_count();
        let mut comp = vec![u32::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if comp[start] != u32::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = next;
            while let Some(v) = stack.pop() {
                for &fi in &self.incidence[v] {
                    for &w in &self.facets[fi as usize] {
                        if comp[w as usize] == u32::MAX {
                            comp[w as usize] = next;
                            stack.push(w as usize);
                        }
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Categorical product: vertices are label pairs, facets are the full
    /// grids `tau x rho` of facet pairs.
    pub fn categorical_product(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let n2 = other.vertex_count() as VertexId;
        let mut labels = Vec::with_capacity(self.vertex_count() * other.vertex_count());
        for a in &self.labels {
            for b in &other.labels {
                labels.push(VertexLabel::tuple(vec![a.clone(), b.clone()]));
            }
        }
        let mut facets = Vec::with_capacity(self.facet_count() * other.facet_count());
        for t in &self.facets {
            for r in &other.facets {
                let mut grid = Vec::with_capacity(t.len() * r.len());
                for &i in t {
                    for &j in r {
                        grid.push(i * n2 + j);
                    }
                }
                facets.push(grid);
            }
        }
        SimplicialComplex::from_parts(labels, facets)
    }

    /// The `n`-fold categorical power with flat `n`-tuple labels.
    pub fn power(&self, n: usize) -> Result<SimplicialComplex> {
        if n < 1 {
            return Err(Error::InvalidArity(n));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let base = self.vertex_count();
        let total = base
            .checked_pow(n as u32)
            .filter(|&t| t <= u32::MAX as usize)
            .ok_or(Error::InvalidArity(n))?;
        let mut labels = Vec::with_capacity(total);
        let mut digits = vec![0usize; n];
        for _ in 0..total {
            labels.push(VertexLabel::tuple(
                digits.iter().map(|&d| self.labels[d].clone()).collect(),
            ));
            increment(&mut digits, base);
        }
        let mut facets: Vec<Vec<VertexId>> = vec![vec![0]];
        for _ in 0..n {
            let mut next = Vec::with_capacity(facets.len() * self.facet_count());
            for partial in &facets {
                for f in &self.facets {
                    let mut grid = Vec::with_capacity(partial.len() * f.len());
                    for &p in partial {
                        for &v in f {
                            grid.push(p * base as VertexId + v);
                        }
                    }
                    next.push(grid);
                }
            }
            facets = next;
        }
        Ok(SimplicialComplex::from_parts(labels, facets))
    }

    /// Smallest subcomplex containing the given simplices.
    pub fn generated_subcomplex(&self, simplices: &[Simplex]) -> Result<SimplicialComplex> {
        if simplices.is_empty() {
            return Err(Error::EmptyInput("simplex collection"));
        }
        for s in simplices {
            if !self.has_simplex(s) {
                return Err(Error::NotASimplex(s.to_string()));
            }
        }
        SimplicialComplex::build(simplices.iter().map(|s| s.vertices().to_vec()).collect())
    }

    /// Subcomplex generated by a set of this complex's facets. Returns the
    /// subcomplex and, for each of its vertices, the id in `self`.
    pub(crate) fn sub_by_facets(&self, facet_ids: &[usize]) -> (SimplicialComplex, Vec<VertexId>) {
        let mut present = FixedBitSet::with_capacity(self.vertex_count());
        for &fi in facet_ids {
            present.union_with(&self.facet_bits[fi]);
        }
        let parent: Vec<VertexId> = present.ones().map(|v| v as VertexId).collect();
        let mut local = vec![u32::MAX; self.vertex_count()];
        for (i, &p) in parent.iter().enumerate() {
            local[p as usize] = i as u32;
        }
        let labels = parent.iter().map(|&p| self.label(p).clone()).collect();
        let facets = facet_ids
            .iter()
            .map(|&fi| self.facets[fi].iter().map(|&v| local[v as usize]).collect())
            .collect();
        (SimplicialComplex::from_parts(labels, facets), parent)
    }

    /// True iff every vertex and facet of `self` belongs to `other`.
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        (0..self.facet_count()).all(|i| other.has_simplex(&self.facet_simplex(i)))
    }
}

fn increment(digits: &mut [usize], base: usize) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return;
        }
        *d = 0;
    }
}

pub(crate) fn to_bits(n: usize, ids: &[VertexId]) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    for &v in ids {
        b.insert(v as usize);
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fig1_l() -> SimplicialComplex {
        SimplicialComplex::from_tokens(&[&["v0", "v1"], &["v1", "v2"], &["v1", "v3"], &["v2", "v3"]])
            .unwrap()
    }

    fn antichain(k: &SimplicialComplex) -> bool {
        let bits = k.facet_bits();
        (0..bits.len()).all(|i| (0..bits.len()).all(|j| i == j || !bits[i].is_subset(&bits[j])))
    }

    #[test]
    fn build_fig1() {
        let l = fig1_l();
        assert_eq!(l.vertex_count(), 4);
        assert_eq!(l.facet_count(), 4);
        assert!(antichain(&l));
    }

    #[test]
    fn build_dedups_and_drops_contained() {
        let k = SimplicialComplex::from_tokens(&[&["a"], &["a"]]).unwrap();
        assert_eq!((k.vertex_count(), k.facet_count()), (1, 1));
        let k = SimplicialComplex::from_tokens(&[&["a", "b", "c"], &["a", "b"]]).unwrap();
        assert_eq!(k.facet_simplices(), vec![Simplex::of(&["a", "b", "c"])]);
        let k = SimplicialComplex::from_tokens(&[&["b", "a", "a"]]).unwrap();
        assert_eq!(k.facet_simplices(), vec![Simplex::of(&["a", "b"])]);
    }

    #[test]
    fn build_rejects_empty() {
        assert!(matches!(SimplicialComplex::build(vec![]), Err(Error::EmptyInput(_))));
        assert!(matches!(
            SimplicialComplex::build(vec![vec!["a".into()], vec![]]),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn membership() {
        let l = fig1_l();
        assert!(l.has_simplex(&Simplex::of(&["v2", "v3"])));
        assert!(!l.has_simplex(&Simplex::of(&["v1", "v2", "v3"])));
        assert!(l.has_simplex(&Simplex::of(&["v0"])));
        assert!(!l.has_simplex(&Simplex::of(&["v0", "v2"])));
        assert!(!l.has_simplex(&Simplex::of(&["zz"])));
    }

    #[test]
    fn product_with_point_is_edge() {
        let e = SimplicialComplex::from_tokens(&[&["a", "b"]]).unwrap();
        let p = SimplicialComplex::from_tokens(&[&["w"]]).unwrap();
        let prod = e.categorical_product(&p);
        assert_eq!(prod.facet_simplices(), vec![Simplex::of(&["(a,w)", "(b,w)"])]);
    }

    #[test]
    fn fig1_square() {
        let l = fig1_l();
        let sq = l.categorical_product(&l);
        assert_eq!(sq.vertex_count(), 16);
        assert_eq!(sq.facet_count(), 16);
        assert!(sq.facets().iter().all(|f| f.len() == 4));
        assert!(antichain(&sq));
        let p2 = l.power(2).unwrap();
        assert_eq!(p2, sq);
    }

    #[test]
    fn power_edge_cases() {
        let l = fig1_l();
        assert_eq!(l.power(1).unwrap(), l);
        assert!(matches!(l.power(0), Err(Error::InvalidArity(0))));
        let pt = SimplicialComplex::from_tokens(&[&["x"]]).unwrap();
        let p3 = pt.power(3).unwrap();
        assert_eq!((p3.vertex_count(), p3.facet_count()), (1, 1));
        let c = l.power(3).unwrap();
        assert_eq!((c.vertex_count(), c.facet_count()), (64, 64));
    }

    #[test]
    fn connectivity() {
        assert!(fig1_l().is_edge_path_connected());
        assert!(!SimplicialComplex::from_tokens(&[&["a"], &["b"]])
            .unwrap()
            .is_edge_path_connected());
        assert!(SimplicialComplex::from_tokens(&[&["a"]]).unwrap().is_edge_path_connected());
    }

    #[test]
    fn generated_subcomplexes() {
        let l = fig1_l();
        let s = l.generated_subcomplex(&[Simplex::of(&["v1", "v2"])]).unwrap();
        assert_eq!(s.facet_simplices(), vec![Simplex::of(&["v1", "v2"])]);
        assert_eq!(l.generated_subcomplex(&l.facet_simplices()).unwrap(), l);
        assert!(matches!(
            l.generated_subcomplex(&[Simplex::of(&["v0", "v3"])]),
            Err(Error::NotASimplex(_))
        ));
        let lp = SimplicialComplex::from_tokens(&[&["w0", "w2"], &["w1", "w2"], &["w1", "w3"], &["w2", "w3"]])
            .unwrap();
        let l0 = lp
            .generated_subcomplex(&[Simplex::of(&["w0", "w2"]), Simplex::of(&["w1", "w2"])])
            .unwrap();
        assert_eq!(l0.vertex_count(), 3);
        assert!(l0.is_subcomplex_of(&lp));
    }
}
