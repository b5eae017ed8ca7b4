//! Exact minimum covers of a facet set by admissible facet subsets, for a
//! downward-closed admissibility predicate.
//!
//! Small instances enumerate the inclusion-maximal admissible subsets and
//! solve set cover by branch and bound. Larger ones bracket the optimum
//! between a clique bound on the pairwise-conflict graph and a greedy cover,
//! then decide `k`-partitionability for each `k` in between; since the
//! predicate is downward closed a `k`-cover exists iff a `k`-partition does,
//! and a set is admissible iff it contains no minimal inadmissible set.

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashSet;

use varisat::{ExtendFormula, Lit, Solver};

use crate::error::{Error, Result};
use crate::par;

pub(crate) type FacetSet = FixedBitSet;

pub(crate) trait Admissible: Sync {
    fn facet_count(&self) -> usize;
    fn admissible(&self, set: &FacetSet) -> Result<bool>;
    /// Whether two facets share a vertex.
    fn touches(&self, _a: usize, _b: usize) -> bool {
        false
    }
}

/// How minimum covers are searched for.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoverStrategy {
    /// Maximal sets up to [`MAXIMAL_SET_LIMIT`] facets, nogood search above.
    #[default]
    Auto,
    /// Enumerate inclusion-maximal admissible sets, then exact set cover.
    MaximalSets,
    /// Lazily learned minimal inadmissible sets and a SAT search for a
    /// `k`-partition avoiding them, for increasing `k`.
    Nogoods,
}

pub const MAXIMAL_SET_LIMIT: usize = 16;

pub(crate) struct Cover {
    pub(crate) pieces: Vec<FacetSet>,
    pub(crate) strategy: CoverStrategy,
}

fn singleton(n: usize, i: usize) -> FacetSet {
    let mut s = FacetSet::with_capacity(n);
    s.insert(i);
    s
}

fn with(set: &FacetSet, i: usize) -> FacetSet {
    let mut s = set.clone();
    s.insert(i);
    s
}

/// Returns `Err(NoCover)` with the first facet that is not admissible on
/// its own.
pub(crate) fn min_cover(adm: &dyn Admissible, strategy: CoverStrategy) -> Result<Cover> {
    let n = adm.facet_count();
    let mut full = FacetSet::with_capacity(n);
    full.insert_range(..);
    let pick = match strategy {
        CoverStrategy::Auto if n <= MAXIMAL_SET_LIMIT => CoverStrategy::MaximalSets,
        CoverStrategy::Auto => CoverStrategy::Nogoods,
        s => s,
    };
    if adm.admissible(&full)? {
        return Ok(Cover {
            pieces: vec![full],
            strategy: pick,
        });
    }
    let singles = par::map_range(n, |i| adm.admissible(&singleton(n, i)));
    for (i, ok) in singles.into_iter().enumerate() {
        if !ok? {
            return Err(Error::NoCover(i.to_string()));
        }
    }
    let conflicts = conflict_graph(adm, n)?;
    let pieces = match pick {
        CoverStrategy::MaximalSets => {
            let maximal = maximal_sets(adm, &conflicts)?;
            disjoint(set_cover(n, &maximal))
        }
        _ => nogood_cover(adm, &conflicts)?,
    };
    Ok(Cover {
        pieces,
        strategy: pick,
    })
}

/// Keeps each facet only in the first piece containing it; subsets of
/// admissible sets stay admissible.
fn disjoint(mut pieces: Vec<FacetSet>) -> Vec<FacetSet> {
    for i in 1..pieces.len() {
        let (done, rest) = pieces.split_at_mut(i);
        for p in done.iter() {
            rest[0].difference_with(p);
        }
    }
    pieces.retain(|p| !p.is_clear());
    pieces
}

fn conflict_graph(adm: &dyn Admissible, n: usize) -> Result<Vec<FacetSet>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let verdicts = par::map(&pairs, |&(i, j)| adm.admissible(&with(&singleton(n, i), j)));
    let mut conflicts = vec![FacetSet::with_capacity(n); n];
    for (&(i, j), ok) in pairs.iter().zip(verdicts) {
        if !ok? {
            conflicts[i].insert(j);
            conflicts[j].insert(i);
        }
    }
    Ok(conflicts)
}

/// All inclusion-maximal admissible sets, in lexicographic include-first
/// order.
pub(crate) fn maximal_sets(adm: &dyn Admissible, conflicts: &[FacetSet]) -> Result<Vec<FacetSet>> {
    let n = conflicts.len();
    let mut out = Vec::new();
    let mut cur = FacetSet::with_capacity(n);
    grow(adm, conflicts, 0, &mut cur, &mut out)?;
    Ok(out)
}

fn compatible(conflicts: &[FacetSet], set: &FacetSet, i: usize) -> bool {
    conflicts[i].is_disjoint(set)
}

fn grow(
    adm: &dyn Admissible,
    conflicts: &[FacetSet],
    i: usize,
    cur: &mut FacetSet,
    out: &mut Vec<FacetSet>,
) -> Result<()> {
    let n = conflicts.len();
    if i == n {
        for j in 0..n {
            if !cur.contains(j) && compatible(conflicts, cur, j) && adm.admissible(&with(cur, j))? {
                return Ok(());
            }
        }
        out.push(cur.clone());
        return Ok(());
    }
    if compatible(conflicts, cur, i) && adm.admissible(&with(cur, i))? {
        cur.insert(i);
        grow(adm, conflicts, i + 1, cur, out)?;
        cur.set(i, false);
        // Excluding i can only end maximal if something later blocks it.
        let mut rest = cur.clone();
        rest.insert_range(i..n);
        if adm_contained(adm, conflicts, &rest)? {
            return Ok(());
        }
    }
    grow(adm, conflicts, i + 1, cur, out)
}

/// Admissibility of a set that is usually far from admissible; the cheap
/// pairwise test short-circuits most calls.
fn adm_contained(adm: &dyn Admissible, conflicts: &[FacetSet], set: &FacetSet) -> Result<bool> {
    if set.ones().any(|i| !conflicts[i].is_disjoint(set)) {
        return Ok(false);
    }
    adm.admissible(set)
}

/// Minimum cover by branch and bound, seeded with the greedy cover.
pub(crate) fn set_cover(n: usize, sets: &[FacetSet]) -> Vec<FacetSet> {
    let mut uncovered = FacetSet::with_capacity(n);
    uncovered.insert_range(..);
    let greedy = greedy_cover(&uncovered, sets);
    let mut best = greedy.clone();
    let max_size = sets.iter().map(|s| s.count_ones(..)).max().unwrap_or(1).max(1);
    let mut chosen = Vec::new();
    branch(&uncovered, sets, max_size, &mut chosen, &mut best);
    best.iter().map(|&i| sets[i].clone()).collect()
}

fn greedy_cover(uncovered: &FacetSet, sets: &[FacetSet]) -> Vec<usize> {
    let mut left = uncovered.clone();
    let mut chosen = Vec::new();
    while !left.is_clear() {
        let (best, _) = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.intersection(&left).count()))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("sets cover every facet");
        left.difference_with(&sets[best]);
        chosen.push(best);
    }
    chosen
}

fn branch(
    uncovered: &FacetSet,
    sets: &[FacetSet],
    max_size: usize,
    chosen: &mut Vec<usize>,
    best: &mut Vec<usize>,
) {
    if uncovered.is_clear() {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return;
    }
    let need = uncovered.count_ones(..).div_ceil(max_size);
    if chosen.len() + need >= best.len() {
        return;
    }
    // the uncovered element with fewest covering sets
    let e = uncovered
        .ones()
        .min_by_key(|&e| sets.iter().filter(|s| s.contains(e)).count())
        .unwrap();
    let mut options: Vec<usize> = (0..sets.len()).filter(|&i| sets[i].contains(e)).collect();
    options.sort_by_key(|&i| std::cmp::Reverse(sets[i].intersection(uncovered).count()));
    for i in options {
        let mut left = uncovered.clone();
        left.difference_with(&sets[i]);
        chosen.push(i);
        branch(&left, sets, max_size, chosen, best);
        chosen.pop();
    }
}

const CLIQUE_NODE_LIMIT: usize = 200_000;

/// Largest clique found in the conflict graph (exact unless the node limit
/// is hit, in which case it is still a valid lower bound).
pub(crate) fn conflict_clique(conflicts: &[FacetSet]) -> Vec<usize> {
    let n = conflicts.len();
    let mut best: Vec<usize> = Vec::new();
    let mut cand = FacetSet::with_capacity(n);
    cand.insert_range(..);
    let mut nodes = 0usize;
    let mut cur = Vec::new();
    clique_rec(conflicts, &mut cur, cand, &mut best, &mut nodes);
    best
}

fn clique_rec(
    adj: &[FacetSet],
    cur: &mut Vec<usize>,
    mut cand: FacetSet,
    best: &mut Vec<usize>,
    nodes: &mut usize,
) {
    *nodes += 1;
    if cur.len() > best.len() {
        *best = cur.clone();
    }
    if *nodes > CLIQUE_NODE_LIMIT {
        return;
    }
    // greedy colouring bound
    let order: Vec<usize> = cand.ones().collect();
    let mut colour_of = vec![0usize; adj.len()];
    let mut classes: Vec<FacetSet> = Vec::new();
    for &v in &order {
        let k = classes
            .iter()
            .position(|c| c.is_disjoint(&adj[v]))
            .unwrap_or(classes.len());
        if k == classes.len() {
            classes.push(FacetSet::with_capacity(adj.len()));
        }
        classes[k].insert(v);
        colour_of[v] = k + 1;
    }
    let mut by_colour = order.clone();
    by_colour.sort_by_key(|&v| std::cmp::Reverse(colour_of[v]));
    for v in by_colour {
        if cur.len() + colour_of[v] <= best.len() {
            return;
        }
        cur.push(v);
        let mut next = cand.clone();
        next.intersect_with(&adj[v]);
        clique_rec(adj, cur, next, best, nodes);
        cur.pop();
        cand.set(v, false);
    }
}

fn greedy_partition(adm: &dyn Admissible, conflicts: &[FacetSet]) -> Result<Vec<FacetSet>> {
    let n = conflicts.len();
    let mut left = FacetSet::with_capacity(n);
    left.insert_range(..);
    let mut pieces = Vec::new();
    while !left.is_clear() {
        let seed = left
            .ones()
            .max_by(|&a, &b| {
                conflicts[a]
                    .count_ones(..)
                    .cmp(&conflicts[b].count_ones(..))
                    .then(b.cmp(&a))
            })
            .unwrap();
        let mut piece = singleton(n, seed);
        for f in left.ones() {
            if f != seed && compatible(conflicts, &piece, f) && adm.admissible(&with(&piece, f))? {
                piece.insert(f);
            }
        }
        left.difference_with(&piece);
        pieces.push(piece);
    }
    Ok(pieces)
}

fn nogood_cover(adm: &dyn Admissible, conflicts: &[FacetSet]) -> Result<Vec<FacetSet>> {
    let n = conflicts.len();
    let clique = conflict_clique(conflicts);
    let greedy = greedy_partition(adm, conflicts)?;
    let mut nogoods = Nogoods {
        list: (0..n)
            .flat_map(|i| conflicts[i].ones().filter(move |&j| j > i).map(move |j| vec![i, j]))
            .collect(),
        seen: FxHashSet::default(),
    };
    nogoods.seen.extend(nogoods.list.iter().cloned());
    for k in clique.len().max(1)..greedy.len() {
        if let Some(p) = k_cover(adm, n, k, &mut nogoods)? {
            return Ok(p);
        }
    }
    Ok(greedy)
}

/// Minimal inadmissible sets found so far.
struct Nogoods {
    list: Vec<Vec<usize>>,
    seen: FxHashSet<Vec<usize>>,
}

impl Nogoods {
    /// Adds `h` unless known; returns the index of the first new entry.
    fn add(&mut self, h: Vec<usize>) -> usize {
        let start = self.list.len();
        if self.seen.insert(h.clone()) {
            self.list.push(h);
        }
        start
    }
}

/// Decides whether `k` admissible blocks suffice. A SAT model proposes a
/// partition avoiding every known nogood; blocks that fail the real check
/// are shrunk to minimal inadmissible sets and added as nogoods. All nogoods
/// are genuinely inadmissible, so unsatisfiability is a proof.
fn k_cover(
    adm: &dyn Admissible,
    n: usize,
    k: usize,
    nogoods: &mut Nogoods,
) -> Result<Option<Vec<FacetSet>>> {
    let mut solver = Solver::new();
    let x = |f: usize, p: usize| Lit::from_index(f * k + p, true);
    // used[f][p]: some facet up to f lies in part p
    let used = |f: usize, p: usize| Lit::from_index(n * k + f * k + p, true);
    for f in 0..n {
        // parts are opened in order: a facet enters part p > 0 only if an
        // earlier facet is in part p - 1
        let parts = k.min(f + 1);
        solver.add_clause(&(0..parts).map(|p| x(f, p)).collect::<Vec<_>>());
        for p in parts..k {
            solver.add_clause(&[!x(f, p)]);
        }
        for p in 0..parts {
            for q in p + 1..parts {
                solver.add_clause(&[!x(f, p), !x(f, q)]);
            }
        }
        for p in 0..k {
            solver.add_clause(&[!x(f, p), used(f, p)]);
            if f == 0 {
                solver.add_clause(&[!used(f, p), x(f, p)]);
            } else {
                solver.add_clause(&[!used(f, p), x(f, p), used(f - 1, p)]);
                solver.add_clause(&[!used(f - 1, p), used(f, p)]);
                if p > 0 {
                    solver.add_clause(&[!x(f, p), used(f - 1, p - 1)]);
                }
            }
        }
    }
    let forbid = |solver: &mut Solver, h: &[usize]| {
        for p in 0..k {
            solver.add_clause(&h.iter().map(|&f| !x(f, p)).collect::<Vec<_>>());
        }
    };
    for h in &nogoods.list {
        forbid(&mut solver, h);
    }
    loop {
        if !solver.solve().expect("solver without proof output cannot fail") {
            return Ok(None);
        }
        let model = solver.model().unwrap();
        let mut parts = vec![FacetSet::with_capacity(n); k];
        for lit in model.iter().filter(|l| l.is_positive() && l.index() < n * k) {
            let i = lit.index();
            parts[i % k].insert(i / k);
        }
        parts.retain(|p| !p.is_clear());
        let failures = par::map(&parts, |p| first_failure(adm, p));
        let mut clean = true;
        for failure in failures {
            if let Some(bad) = failure? {
                clean = false;
                let from = nogoods.add(shrink(adm, &bad)?);
                for h in &nogoods.list[from..] {
                    forbid(&mut solver, h);
                }
            }
        }
        if clean {
            return Ok(Some(parts));
        }
    }
}

/// Grows the set facet by facet, preferring facets that touch what is
/// already there, and returns the first inadmissible prefix. Small failing
/// pieces keep the class searches small.
fn first_failure(adm: &dyn Admissible, set: &FacetSet) -> Result<Option<FacetSet>> {
    let mut left: Vec<usize> = set.ones().collect();
    let mut cur = FacetSet::with_capacity(set.len());
    let mut members: Vec<usize> = Vec::new();
    while !left.is_empty() {
        let pos = left
            .iter()
            .position(|&f| members.iter().any(|&m| adm.touches(m, f)))
            .unwrap_or(0);
        let f = left.remove(pos);
        cur.insert(f);
        members.push(f);
        if !adm.admissible(&cur)? {
            return Ok(Some(cur));
        }
    }
    Ok(None)
}

/// A minimal inadmissible subset of an inadmissible set, by deletion.
fn shrink(adm: &dyn Admissible, set: &FacetSet) -> Result<Vec<usize>> {
    let mut cur = set.clone();
    for f in set.ones() {
        cur.set(f, false);
        if adm.admissible(&cur)? {
            cur.insert(f);
        }
    }
    Ok(cur.ones().collect())
}
