//! Mod-2 obstructions to contiguity. Contiguous maps are chain homotopic, so
//! maps in one class send each vertex of a connected piece into a single
//! component and induce the same map on `H_k(-; Z/2)` for every `k`.

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;

/// Per-dimension cap on simplices enumerated; larger dimensions are skipped.
const SIMPLEX_LIMIT: usize = 4_000;

/// Distinct `k`-simplices (faces of size `k + 1`) of the complex spanned by
/// `facets`, or `None` past the cap.
fn faces(facets: &[Vec<u32>], k: usize) -> Option<FxHashMap<Vec<u32>, usize>> {
    let mut out = FxHashMap::default();
    let mut pick = Vec::with_capacity(k + 1);
    for f in facets {
        if f.len() > k && !subsets(f, k + 1, 0, &mut pick, &mut out) {
            return None;
        }
    }
    Some(out)
}

fn subsets(f: &[u32], size: usize, from: usize, pick: &mut Vec<u32>, out: &mut FxHashMap<Vec<u32>, usize>) -> bool {
    if pick.len() == size {
        let n = out.len();
        out.entry(pick.clone()).or_insert(n);
        return out.len() <= SIMPLEX_LIMIT;
    }
    for i in from..=f.len() - (size - pick.len()) {
        pick.push(f[i]);
        let ok = subsets(f, size, i + 1, pick, out);
        pick.pop();
        if !ok {
            return false;
        }
    }
    true
}

fn boundary(s: &[u32], index: &FxHashMap<Vec<u32>, usize>, len: usize) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(len);
    for i in 0..s.len() {
        let mut face = s.to_vec();
        face.remove(i);
        b.toggle(index[&face]);
    }
    b
}

/// Row-echelon span over GF(2), one row per pivot (the row's lowest bit).
struct Span {
    rows: Vec<Option<FixedBitSet>>,
}

impl Span {
    fn new(len: usize) -> Self {
        Span { rows: vec![None; len] }
    }

    fn reduce(&self, v: &mut FixedBitSet) -> Option<usize> {
        while let Some(p) = v.minimum() {
            match &self.rows[p] {
                Some(r) => *v ^= r,
                None => return Some(p),
            }
        }
        None
    }
}

/// One dimension of a codomain: its simplices and the boundary space.
struct Level {
    index: FxHashMap<Vec<u32>, usize>,
    boundaries: Span,
}

/// Codomain data for the obstruction checks.
pub(crate) struct Boundaries {
    component: Vec<u32>,
    /// `levels[k - 1]` for `k >= 1`, while within the caps.
    levels: Vec<Level>,
}

fn find(p: &mut [u32], mut x: u32) -> u32 {
    while p[x as usize] != x {
        p[x as usize] = p[p[x as usize] as usize];
        x = p[x as usize];
    }
    x
}

fn components(vertices: usize, facets: &[Vec<u32>]) -> Vec<u32> {
    let mut parent: Vec<u32> = (0..vertices as u32).collect();
    for f in facets {
        for w in f.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a as usize] = b;
        }
    }
    (0..vertices as u32).map(|v| find(&mut parent, v)).collect()
}

impl Boundaries {
    pub(crate) fn new(vertices: usize, facets: &[Vec<u32>]) -> Self {
        let dim = facets.iter().map(|f| f.len()).max().unwrap_or(1).saturating_sub(1);
        let mut levels = Vec::new();
        let mut current = faces(facets, 1);
        for k in 1..=dim {
            let Some(index) = current.take() else { break };
            let Some(above) = faces(facets, k + 1) else { break };
            let mut boundaries = Span::new(index.len());
            for s in above.keys() {
                let mut b = boundary(s, &index, index.len());
                if let Some(p) = boundaries.reduce(&mut b) {
                    boundaries.rows[p] = Some(b);
                }
            }
            levels.push(Level { index, boundaries });
            current = Some(above);
        }
        Boundaries { component: components(vertices, facets), levels }
    }

    /// True when `f` and `g`, maps from the piece with the given facets
    /// into this complex, are certainly not in one contiguity class.
    pub(crate) fn separates(&self, vertices: usize, facets: &[Vec<u32>], f: &[u32], g: &[u32]) -> bool {
        if (0..vertices).any(|v| self.component[f[v] as usize] != self.component[g[v] as usize]) {
            return true;
        }
        let mut below = faces(facets, 0);
        for (k, level) in self.levels.iter().enumerate().map(|(i, l)| (i + 1, l)) {
            let (Some(lower), Some(index)) = (below.take(), faces(facets, k)) else { return false };
            if self.cycles_differ(k, level, &lower, &index, f, g) {
                return true;
            }
            below = Some(index);
        }
        false
    }

    /// Runs through a basis of the `k`-cycles of the piece and compares the
    /// images of each modulo boundaries.
    fn cycles_differ(
        &self,
        k: usize,
        level: &Level,
        lower: &FxHashMap<Vec<u32>, usize>,
        index: &FxHashMap<Vec<u32>, usize>,
        f: &[u32],
        g: &[u32],
    ) -> bool {
        let simplices: Vec<&Vec<u32>> = {
            let mut v: Vec<_> = index.iter().collect();
            v.sort_unstable_by_key(|e| *e.1);
            v.into_iter().map(|e| e.0).collect()
        };
        let mut span = Span::new(lower.len());
        let mut combos: Vec<Option<FixedBitSet>> = vec![None; lower.len()];
        for (i, s) in simplices.iter().enumerate() {
            let mut b = boundary(s, lower, lower.len());
            let mut c = FixedBitSet::with_capacity(simplices.len());
            c.insert(i);
            while let Some(p) = b.minimum() {
                match &span.rows[p] {
                    Some(r) => {
                        b ^= r;
                        c ^= combos[p].as_ref().unwrap();
                    }
                    None => break,
                }
            }
            if let Some(p) = b.minimum() {
                span.rows[p] = Some(b);
                combos[p] = Some(c);
                continue;
            }
            let mut w = FixedBitSet::with_capacity(level.index.len());
            for j in c.ones() {
                for h in [f, g] {
                    let mut img: Vec<u32> = simplices[j].iter().map(|&v| h[v as usize]).collect();
                    img.sort_unstable();
                    img.dedup();
                    if img.len() == k + 1 {
                        w.toggle(level.index[&img]);
                    }
                }
            }
            if level.boundaries.reduce(&mut w).is_some() {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_detects_winding() {
        let tri = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        let b = Boundaries::new(3, &tri);
        assert!(b.separates(3, &tri, &[0, 1, 2], &[0, 0, 0]));
        assert!(!b.separates(3, &tri, &[0, 1, 2], &[0, 1, 2]));
        // A path carries no cycles.
        let path = vec![vec![0, 1], vec![1, 2]];
        assert!(!b.separates(3, &path, &[0, 1, 2], &[0, 0, 0]));
    }

    #[test]
    fn filled_triangle_kills_the_cycle() {
        let b = Boundaries::new(3, &[vec![0, 1, 2]]);
        let tri = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        assert!(!b.separates(3, &tri, &[0, 1, 2], &[0, 0, 0]));
    }

    #[test]
    fn sphere_detects_the_fundamental_class() {
        let sphere = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        let b = Boundaries::new(4, &sphere);
        assert!(b.separates(4, &sphere, &[0, 1, 2, 3], &[0, 0, 0, 0]));
        // A disc inside the sphere has no 2-cycles.
        assert!(!b.separates(4, &sphere[..3], &[0, 1, 2, 3], &[0, 0, 0, 0]));
    }

    #[test]
    fn components() {
        let b = Boundaries::new(2, &[vec![0], vec![1]]);
        assert!(b.separates(1, &[vec![0]], &[0], &[1]));
        // Both ends of an edge must land in one component.
        let b = Boundaries::new(3, &[vec![0, 1], vec![2]]);
        assert!(!b.separates(2, &[vec![0, 1]], &[0, 1], &[1, 0]));
    }
}
