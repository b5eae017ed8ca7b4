//! Index-level contiguity search.
//!
//! Maps are image tables of `u8` codomain indices over a compact domain.
//! The graph searched has all simplicial maps as nodes and contiguity as
//! edges; [`class_path`] runs a level-synchronous bidirectional BFS over it.

use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::par;

pub(crate) type Img = Box<[u8]>;

/// Codomain with bitmask membership. At most 128 vertices.
pub(crate) struct Target {
    n: usize,
    facets: Vec<u128>,
    table: Option<Vec<u64>>,
}

const TABLE_LIMIT: usize = 20;

impl Target {
    pub(crate) fn new(n: usize, facets: &[Vec<u32>]) -> Self {
        assert!(n <= 128, "target too large");
        let facets: Vec<u128> = facets
            .iter()
            .map(|f| f.iter().fold(0u128, |m, &v| m | (1u128 << v)))
            .collect();
        let table = (n <= TABLE_LIMIT).then(|| {
            let size = 1usize << n;
            let mut t = vec![0u64; size.div_ceil(64)];
            for &f in &facets {
                let f = f as usize;
                // every subset of the facet
                let mut s = f;
                loop {
                    t[s >> 6] |= 1 << (s & 63);
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & f;
                }
            }
            t
        });
        Target { n, facets, table }
    }

    #[inline]
    pub(crate) fn is_simplex(&self, m: u128) -> bool {
        match &self.table {
            Some(t) => {
                let m = m as usize;
                (t[m >> 6] >> (m & 63)) & 1 == 1
            }
            None => self.facets.iter().any(|&f| m & !f == 0),
        }
    }
}

/// Bound on the candidate product above which only single-vertex changes
/// are generated.
const FULL_NEIGHBORHOOD_LIMIT: usize = 4096;

/// Compact domain: facets over vertices `0..n`.
pub(crate) struct Source {
    pub(crate) n: usize,
    pub(crate) facets: Vec<Vec<u32>>,
    pub(crate) incidence: Vec<Vec<u32>>,
}

impl Source {
    pub(crate) fn new(n: usize, facets: Vec<Vec<u32>>) -> Self {
        let mut incidence = vec![Vec::new(); n];
        for (i, f) in facets.iter().enumerate() {
            for &v in f {
                incidence[v as usize].push(i as u32);
            }
        }
        Source {
            n,
            facets,
            incidence,
        }
    }

    #[cfg(test)]
    fn is_map(&self, t: &Target, img: &[u8]) -> bool {
        self.facets
            .iter()
            .all(|f| t.is_simplex(f.iter().fold(0u128, |m, &v| m | (1u128 << img[v as usize]))))
    }

    #[cfg(test)]
    fn contiguous(&self, t: &Target, a: &[u8], b: &[u8]) -> bool {
        self.facets.iter().all(|f| {
            t.is_simplex(f.iter().fold(0u128, |m, &v| {
                m | (1u128 << a[v as usize]) | (1u128 << b[v as usize])
            }))
        })
    }

    /// Every map contiguous to `f` (including `f`), in lexicographic order,
    /// or only the single-vertex changes of `f` when that set would be large.
    pub(crate) fn neighbors(&self, t: &Target, f: &[u8]) -> Vec<Img> {
        let base: Vec<u128> = self
            .facets
            .iter()
            .map(|fa| fa.iter().fold(0u128, |m, &v| m | (1u128 << f[v as usize])))
            .collect();
        let candidates: Vec<Vec<u8>> = (0..self.n)
            .map(|v| {
                (0..t.n as u8)
                    .filter(|&c| {
                        self.incidence[v]
                            .iter()
                            .all(|&fi| t.is_simplex(base[fi as usize] | (1u128 << c)))
                    })
                    .collect()
            })
            .collect();
        let product = candidates.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
        if product.is_none_or(|p| p > FULL_NEIGHBORHOOD_LIMIT) {
            // Single-vertex changes generate the same classes with far fewer
            // images per map.
            let mut out: Vec<Img> = Vec::new();
            for (v, cs) in candidates.iter().enumerate() {
                for &c in cs {
                    if c != f[v] {
                        let mut h: Img = f.into();
                        h[v] = c;
                        out.push(h);
                    }
                }
            }
            out.sort_unstable();
            return out;
        }
        let mut walk = Walk {
            src: self,
            t,
            candidates: &candidates,
            cur: base,
            g: vec![0u8; self.n],
            out: Vec::new(),
        };
        walk.go(0);
        walk.out
    }
}

struct Walk<'a> {
    src: &'a Source,
    t: &'a Target,
    candidates: &'a [Vec<u8>],
    cur: Vec<u128>,
    g: Vec<u8>,
    out: Vec<Img>,
}

impl Walk<'_> {
    fn go(&mut self, v: usize) {
        if v == self.src.n {
            self.out.push(self.g.clone().into_boxed_slice());
            return;
        }
        let inc = &self.src.incidence[v];
        for &c in &self.candidates[v] {
            let bit = 1u128 << c;
            if inc
                .iter()
                .all(|&fi| self.t.is_simplex(self.cur[fi as usize] | bit))
            {
                let saved: Vec<u128> = inc.iter().map(|&fi| self.cur[fi as usize]).collect();
                for &fi in inc {
                    self.cur[fi as usize] |= bit;
                }
                self.g[v] = c;
                self.go(v + 1);
                for (&fi, s) in inc.iter().zip(saved) {
                    self.cur[fi as usize] = s;
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Limits {
    pub(crate) max_states: usize,
    pub(crate) deadline: Option<Instant>,
}

impl Limits {
    pub(crate) fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Debug)]
pub(crate) enum PathSearch {
    /// Shortest chain from `f` to `g`, both endpoints included.
    Found(Vec<Img>),
    /// One side's component was exhausted; carries the number of visited maps.
    Separate(usize),
    Exhausted(usize),
}

struct Tree {
    nodes: Vec<Img>,
    parent: Vec<u32>,
    index: FxHashMap<Img, u32>,
    frontier: Vec<u32>,
}

impl Tree {
    fn rooted(root: &[u8]) -> Self {
        let root: Img = root.into();
        let mut index = FxHashMap::default();
        index.insert(root.clone(), 0);
        Tree {
            nodes: vec![root],
            parent: vec![u32::MAX],
            index,
            frontier: vec![0],
        }
    }

    fn path_to_root(&self, mut i: u32) -> Vec<Img> {
        let mut out = Vec::new();
        loop {
            out.push(self.nodes[i as usize].clone());
            let p = self.parent[i as usize];
            if p == u32::MAX {
                return out;
            }
            i = p;
        }
    }
}

const CHUNK: usize = 2048;
/// Target number of neighbor images held at once while expanding a frontier.
const NEIGHBOR_BATCH: usize = 1 << 16;

/// Bidirectional BFS between `f` and `g`. Deterministic: frontiers are
/// expanded in discovery order and neighbors in lexicographic order, so the
/// returned chain does not depend on thread scheduling.
pub(crate) fn class_path(src: &Source, t: &Target, f: &[u8], g: &[u8], limits: Limits) -> PathSearch {
    if f == g {
        return PathSearch::Found(vec![f.into()]);
    }
    let mut a = Tree::rooted(f);
    let mut b = Tree::rooted(g);
    let mut width = 1;
    loop {
        let total = a.nodes.len() + b.nodes.len();
        if a.frontier.is_empty() || b.frontier.is_empty() {
            return PathSearch::Separate(total);
        }
        let forward = a.frontier.len() <= b.frontier.len();
        let (grow, other) = if forward { (&mut a, &b) } else { (&mut b, &a) };
        let frontier = std::mem::take(&mut grow.frontier);
        let mut next = Vec::new();
        let mut start = 0;
        while start < frontier.len() {
            if limits.expired() {
                return PathSearch::Exhausted(grow.nodes.len() + other.nodes.len());
            }
            let chunk = &frontier[start..(start + width).min(frontier.len())];
            start += chunk.len();
            let expanded = par::map(chunk, |&i| src.neighbors(t, &grow.nodes[i as usize]));
            let produced: usize = expanded.iter().map(Vec::len).sum();
            width = (NEIGHBOR_BATCH * chunk.len() / produced.max(1)).clamp(1, CHUNK);
            for (&i, nbrs) in chunk.iter().zip(expanded) {
                for h in nbrs {
                    if grow.index.contains_key(&h) {
                        continue;
                    }
                    if let Some(&j) = other.index.get(&h) {
                        let mut mine = grow.path_to_root(i);
                        mine.reverse();
                        mine.extend(other.path_to_root(j));
                        if !forward {
                            mine.reverse();
                        }
                        return PathSearch::Found(mine);
                    }
                    let id = grow.nodes.len() as u32;
                    grow.nodes.push(h.clone());
                    grow.parent.push(i);
                    grow.index.insert(h, id);
                    next.push(id);
                    if grow.nodes.len() + other.nodes.len() > limits.max_states {
                        return PathSearch::Exhausted(grow.nodes.len() + other.nodes.len());
                    }
                }
            }
        }
        grow.frontier = next;
    }
}
