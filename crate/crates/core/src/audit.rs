//! Batch checking of the relations between the invariants of a complex `L`,
//! an optional fibration `φ: L -> L'` and an optional second fibration
//! `ψ: L' -> L''`.
//!
//! Every distinct map tuple is evaluated once (the [`Auditor`] keeps a memo
//! across calls) and independent tuples run concurrently. Relations whose
//! hypotheses fail are SKIPPED; a side that ran out of budget makes the
//! relation INCONCLUSIVE. Lines are sorted by relation name.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rustc_hash::FxHashMap;

use crate::collapse::{core, is_strongly_collapsible};
use crate::complex::{SimplicialComplex, VertexId};
use crate::contiguity::{same_contiguity_class, ClassVerdict};
use crate::distance::sd;
use crate::error::{Error, Result};
use crate::invariants::{
    scat_inclusions_tuple, scat_map_tuple, scat_tuple, tc_map_n_tuple, tc_map_tuple, tc_tuple, InvariantTuple,
};
use crate::map::SimplicialMap;
use crate::random::rng;
use crate::{corpus, par, SearchOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIPPED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub relation: String,
    pub verdict: Verdict,
    pub lhs: Option<usize>,
    pub rhs: Option<usize>,
    /// Why a relation was skipped or left open.
    pub note: Option<String>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        write!(
            f,
            "CHECK {} {} lhs={} rhs={}",
            self.relation,
            self.verdict,
            side(self.lhs),
            side(self.rhs)
        )?;
        if let Some(n) = &self.note {
            write!(f, " note=\"{n}\"")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub checks: Vec<Check>,
}

impl AuditReport {
    pub fn count(&self, v: Verdict) -> usize {
        self.checks.iter().filter(|c| c.verdict == v).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn get(&self, relation: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.relation == relation)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Value {
    Known(usize),
    Skip(String),
    Unknown(String),
}

enum Expr {
    Term(String),
    Min(Vec<String>),
    Zero,
}

#[derive(Clone)]
enum Hyp {
    Holds,
    Fails(String),
    Unknown(String),
}

struct Relation {
    name: String,
    lhs: Expr,
    rhs: Expr,
    equal: bool,
    hyp: Hyp,
}

fn rel(name: impl Into<String>, lhs: Expr, rhs: Expr, equal: bool, hyp: Hyp) -> Relation {
    Relation {
        name: name.into(),
        lhs,
        rhs,
        equal,
        hyp,
    }
}

fn t(s: impl Into<String>) -> Expr {
    Expr::Term(s.into())
}

fn min2(a: impl Into<String>, b: impl Into<String>) -> Expr {
    Expr::Min(vec![a.into(), b.into()])
}

fn tc_l(n: usize) -> String {
    if n == 2 {
        "TC(L)".into()
    } else {
        format!("TC_{n}(L)")
    }
}

fn hyp_if(ok: bool, why: &str) -> Hyp {
    if ok {
        Hyp::Holds
    } else {
        Hyp::Fails(why.into())
    }
}

/// Evaluates audits, remembering every computed distance.
///
/// With core reduction on, a tuple is first restricted to the core of its
/// domain, and the memo is keyed on the vertex-id structure of the result,
/// so relabelled copies of one problem are solved once.
pub struct Auditor {
    opts: SearchOptions,
    cache: FxHashMap<Vec<u32>, Value>,
}

fn encode(out: &mut Vec<u32>, k: &SimplicialComplex) {
    out.push(k.vertex_count() as u32);
    out.push(k.facet_count() as u32);
    for f in k.facets() {
        out.push(f.len() as u32);
        out.extend(f);
    }
}

/// The vertex-id structure of a tuple, without labels.
fn shape(maps: &[SimplicialMap]) -> Vec<u32> {
    let mut out = Vec::new();
    encode(&mut out, maps[0].domain());
    encode(&mut out, maps[0].codomain());
    out.push(maps.len() as u32);
    for m in maps {
        out.extend(m.images());
    }
    out
}

impl Auditor {
    pub fn new(opts: SearchOptions) -> Self {
        Auditor {
            opts,
            cache: FxHashMap::default(),
        }
    }

    /// Number of distinct problems evaluated so far.
    pub fn evaluations(&self) -> usize {
        self.cache.len()
    }

    fn prepare(&self, maps: &[SimplicialMap]) -> Result<(Vec<u32>, Vec<SimplicialMap>)> {
        let maps = if self.opts.reduce_cores && !maps.is_empty() {
            let inclusion = core(maps[0].domain()).inclusion;
            maps.iter()
                .map(|m| SimplicialMap::compose(m, &inclusion))
                .collect::<Result<Vec<_>>>()?
        } else {
            maps.to_vec()
        };
        Ok((shape(&maps), maps))
    }

    /// The distance of one tuple through the memo; an exhausted budget is
    /// reported as [`Error::BudgetExhausted`].
    pub fn distance(&mut self, tuple: InvariantTuple) -> Result<usize> {
        let v = self.evaluate(vec![(String::new(), Ok(tuple))]).remove("").expect("one term");
        match v {
            Value::Known(x) => Ok(x),
            Value::Unknown(why) | Value::Skip(why) => Err(Error::BudgetExhausted(why)),
        }
    }

    fn evaluate(&mut self, terms: Vec<(String, Result<InvariantTuple>)>) -> HashMap<String, Value> {
        let mut keys = Vec::with_capacity(terms.len());
        let mut fresh: Vec<(Vec<u32>, Vec<SimplicialMap>)> = Vec::new();
        for (name, tuple) in terms {
            let key = tuple.and_then(|t| self.prepare(&t.maps));
            if let Ok((k, maps)) = &key {
                if !self.cache.contains_key(k) && !fresh.iter().any(|(f, _)| f == k) {
                    fresh.push((k.clone(), maps.clone()));
                }
            }
            keys.push((name, key.map(|(k, _)| k)));
        }
        let opts = self.opts;
        let values = par::map(&fresh, |(_, maps)| match sd(maps, &opts) {
            Ok(out) => Value::Known(out.value),
            Err(e) => Value::Unknown(e.to_string()),
        });
        self.cache.extend(fresh.into_iter().map(|(k, _)| k).zip(values));
        keys.into_iter()
            .map(|(name, key)| {
                let v = match key {
                    Ok(k) => self.cache[&k].clone(),
                    Err(e) => Value::Skip(e.to_string()),
                };
                (name, v)
            })
            .collect()
    }

    /// Audits `L`, and `φ` (with domain `L`) and `ψ ∘ φ` when given.
    pub fn audit(
        &mut self,
        l: &Arc<SimplicialComplex>,
        phi: Option<&SimplicialMap>,
        psi: Option<&SimplicialMap>,
        n_max: usize,
        seed: u64,
    ) -> Result<AuditReport> {
        if n_max < 2 {
            return Err(Error::InvalidArity(n_max));
        }
        if let Some(phi) = phi {
            if **phi.domain() != **l {
                return Err(Error::DomainMismatch);
            }
        }
        let mut terms = Vec::new();
        let mut relations = Vec::new();
        self.complex_part(l, n_max, seed, &mut terms, &mut relations);
        if let Some(phi) = phi {
            self.map_part(phi, n_max, &mut terms, &mut relations);
            if let Some(psi) = psi {
                composition_part(phi, psi, n_max, &mut terms, &mut relations)?;
            }
        } else if psi.is_some() {
            return Err(Error::TooFewMaps);
        }
        let values = self.evaluate(terms);
        let mut checks: Vec<Check> = relations.into_iter().map(|r| judge(r, &values)).collect();
        checks.sort_by(|a, b| a.relation.cmp(&b.relation));
        Ok(AuditReport { checks })
    }

    fn complex_part(
        &self,
        l: &Arc<SimplicialComplex>,
        n_max: usize,
        seed: u64,
        terms: &mut Vec<(String, Result<InvariantTuple>)>,
        rels: &mut Vec<Relation>,
    ) {
        let reduced = core(l).core;
        let collapsible = is_strongly_collapsible(l);
        for n in 2..=n_max {
            terms.push((tc_l(n), tc_tuple(l, n)));
            terms.push((format!("TC_{n}(core(L))"), tc_tuple(&reduced, n)));
            rels.push(rel(
                format!("{}=TC_{n}(core(L))", tc_l(n)),
                t(tc_l(n)),
                t(format!("TC_{n}(core(L))")),
                true,
                Hyp::Holds,
            ));
            rels.push(rel(
                format!("{}=0[strongly-collapsible]", tc_l(n)),
                t(tc_l(n)),
                Expr::Zero,
                true,
                hyp_if(collapsible, "L is not strongly collapsible"),
            ));
            if n < n_max {
                rels.push(rel(
                    format!("{}<={}", tc_l(n), tc_l(n + 1)),
                    t(tc_l(n)),
                    t(tc_l(n + 1)),
                    false,
                    Hyp::Holds,
                ));
            }
        }
        terms.push(("scat(L)".into(), scat_tuple(l, None)));
        terms.push(("scat(L)[i1,i2]".into(), scat_inclusions_tuple(l, None)));
        rels.push(rel("scat(L)=scat(L)[i1,i2]", t("scat(L)"), t("scat(L)[i1,i2]"), true, Hyp::Holds));
        let v = l.labels().choose(&mut rng(seed)).expect("complexes are nonempty").clone();
        let other = format!("scat(L)[v0={v}]");
        terms.push((other.clone(), scat_tuple(l, Some(&v))));
        rels.push(rel(format!("scat(L)={other}"), t("scat(L)"), t(other), true, Hyp::Holds));
        rels.push(rel(
            "scat(L)=0[strongly-collapsible]",
            t("scat(L)"),
            Expr::Zero,
            true,
            hyp_if(collapsible, "L is not strongly collapsible"),
        ));
        terms.push((
            "scat(L^2)".into(),
            l.power(2).and_then(|sq| scat_tuple(&Arc::new(sq), None)),
        ));
        rels.push(rel("TC(L)<=scat(L^2)", t("TC(L)"), t("scat(L^2)"), false, Hyp::Holds));
    }

    fn map_part(
        &self,
        phi: &SimplicialMap,
        n_max: usize,
        terms: &mut Vec<(String, Result<InvariantTuple>)>,
        rels: &mut Vec<Relation>,
    ) {
        let lp = phi.codomain();
        let bijective = hyp_if(phi.is_bijective(), "phi is not bijective");
        let identity = **phi.domain() == **lp && phi.images().iter().enumerate().all(|(i, &w)| i as VertexId == w);
        let collapsible = is_strongly_collapsible(phi.domain()) || is_strongly_collapsible(lp);
        let (right, left) = self.strong_equivalences(phi);

        terms.push(("TC(phi)".into(), tc_map_tuple(phi)));
        terms.push(("scat(phi)".into(), scat_map_tuple(phi, None)));
        for n in 2..=n_max {
            let tn = format!("TC_{n}(phi)");
            let tlp = format!("TC_{n}(L')");
            terms.push((tn.clone(), tc_map_n_tuple(phi, n)));
            terms.push((tlp.clone(), tc_tuple(lp, n)));
            rels.push(rel(format!("{tn}<={}", tc_l(n)), t(&tn), t(tc_l(n)), false, Hyp::Holds));
            rels.push(rel(
                format!("{tn}<=min({},{tlp})", tc_l(n)),
                t(&tn),
                min2(tc_l(n), &tlp),
                false,
                Hyp::Holds,
            ));
            rels.push(rel(format!("TC(phi)<={}", tc_l(n)), t("TC(phi)"), t(tc_l(n)), false, Hyp::Holds));
            if n < n_max {
                let next = format!("TC_{}(phi)", n + 1);
                rels.push(rel(format!("{tn}<={next}"), t(&tn), t(next), false, Hyp::Holds));
            }
            rels.push(rel(
                format!("{tn}={}[identity]", tc_l(n)),
                t(&tn),
                t(tc_l(n)),
                true,
                hyp_if(identity, "phi is not an identity"),
            ));
            rels.push(rel(
                format!("{tn}=0[L-or-L'-strongly-collapsible]"),
                t(&tn),
                Expr::Zero,
                true,
                hyp_if(collapsible, "neither L nor L' is strongly collapsible"),
            ));
            rels.push(rel(
                format!("{tn}={tlp}[right-strong-equivalence]"),
                t(&tn),
                t(&tlp),
                true,
                right.clone(),
            ));
            rels.push(rel(
                format!("{tn}={}[left-strong-equivalence]", tc_l(n)),
                t(&tn),
                t(tc_l(n)),
                true,
                left.clone(),
            ));
        }
        rels.push(rel(
            "TC(phi)=TC(L)[identity]",
            t("TC(phi)"),
            t("TC(L)"),
            true,
            hyp_if(identity, "phi is not an identity"),
        ));
        rels.push(rel("TC(phi)=TC_2(phi)", t("TC(phi)"), t("TC_2(phi)"), true, Hyp::Holds));
        rels.push(rel("scat(phi)<=TC(phi)", t("scat(phi)"), t("TC(phi)"), false, Hyp::Holds));
        rels.push(rel("scat(phi)<=scat(L)", t("scat(phi)"), t("scat(L)"), false, Hyp::Holds));
        rels.push(rel(
            "scat(L)<=TC(phi)[bijective]",
            t("scat(L)"),
            t("TC(phi)"),
            false,
            bijective.clone(),
        ));
        for n in 3..=n_max {
            let tn = format!("TC_{n}(phi)");
            let chain = [
                ("1", t("scat(phi)"), t("scat(L)")),
                ("2", t("scat(L)"), t("TC(phi)")),
                ("3", t("TC(phi)"), min2("TC(L)", &tn)),
                ("4", min2("TC(L)", &tn), t(tc_l(n))),
            ];
            for (i, lhs, rhs) in chain {
                let name = format!("chain[n={n}]:{i}:{}<={}", show(&lhs), show(&rhs));
                rels.push(rel(name, lhs, rhs, false, bijective.clone()));
            }
        }
    }

    /// Right and left strong equivalences for `φ`: the inverse when `φ` is an
    /// isomorphism, otherwise a simplicial section of `φ`, each verified up
    /// to contiguity.
    fn strong_equivalences(&self, phi: &SimplicialMap) -> (Hyp, Hyp) {
        let Some(omega) = phi.inverse().or_else(|| section(phi)) else {
            let no = || Hyp::Fails("no inverse or simplicial section of phi".into());
            return (no(), no());
        };
        let check = |lhs: Result<SimplicialMap>, id: SimplicialMap, what: &str| -> Hyp {
            let verdict = lhs.and_then(|lhs| same_contiguity_class(&lhs, &id, &self.opts));
            match verdict {
                Ok(ClassVerdict::Equivalent(_)) => Hyp::Holds,
                Ok(ClassVerdict::NotEquivalent { .. }) => Hyp::Fails(format!("{what} is not contiguous to 1")),
                Ok(ClassVerdict::Unknown { .. }) => Hyp::Unknown(format!("class search for {what} ran out of budget")),
                Err(e) => Hyp::Unknown(e.to_string()),
            }
        };
        let right = check(
            SimplicialMap::compose(phi, &omega),
            SimplicialMap::identity(phi.codomain()),
            "phi.omega",
        );
        let left = check(
            SimplicialMap::compose(&omega, phi),
            SimplicialMap::identity(phi.domain()),
            "omega.phi",
        );
        (right, left)
    }
}

fn composition_part(
    phi: &SimplicialMap,
    psi: &SimplicialMap,
    n_max: usize,
    terms: &mut Vec<(String, Result<InvariantTuple>)>,
    rels: &mut Vec<Relation>,
) -> Result<()> {
    let both = SimplicialMap::compose(psi, phi)?;
    for n in 2..=n_max {
        let a = format!("TC_{n}(psi.phi)");
        let b = format!("TC_{n}(psi)");
        terms.push((a.clone(), tc_map_n_tuple(&both, n)));
        terms.push((b.clone(), tc_map_n_tuple(psi, n)));
        rels.push(rel(
            format!("{a}<=min(TC_{n}(phi),{b})"),
            t(&a),
            min2(format!("TC_{n}(phi)"), &b),
            false,
            Hyp::Holds,
        ));
    }
    Ok(())
}

/// A simplicial map `ω: L' -> L` with `φ ∘ ω = 1`, by backtracking over
/// preimages.
pub fn section(phi: &SimplicialMap) -> Option<SimplicialMap> {
    let (dom, cod) = (phi.domain(), phi.codomain());
    let mut pre: Vec<Vec<VertexId>> = vec![Vec::new(); cod.vertex_count()];
    for (v, &w) in phi.images().iter().enumerate() {
        pre[w as usize].push(v as VertexId);
    }
    let mut images = vec![u32::MAX; cod.vertex_count()];
    fn go(w: usize, pre: &[Vec<VertexId>], cod: &SimplicialComplex, dom: &SimplicialComplex, images: &mut [u32]) -> bool {
        if w == images.len() {
            return true;
        }
        for &v in &pre[w] {
            images[w] = v;
            let fits = cod.incident_facets(w as VertexId).iter().all(|&f| {
                let mut img: Vec<u32> = cod.facets()[f as usize]
                    .iter()
                    .map(|&u| images[u as usize])
                    .filter(|&x| x != u32::MAX)
                    .collect();
                img.sort_unstable();
                img.dedup();
                dom.contains_ids(&img)
            });
            if fits && go(w + 1, pre, cod, dom, images) {
                return true;
            }
        }
        images[w] = u32::MAX;
        false
    }
    if !go(0, &pre, cod, dom, &mut images) {
        return None;
    }
    SimplicialMap::from_images(cod.clone(), dom.clone(), images).ok()
}

fn show(e: &Expr) -> String {
    match e {
        Expr::Term(s) => s.clone(),
        Expr::Min(v) => format!("min({})", v.join(",")),
        Expr::Zero => "0".into(),
    }
}

fn value_of(e: &Expr, values: &HashMap<String, Value>) -> Value {
    let one = |s: &String| values.get(s).cloned().expect("every referenced term is evaluated");
    match e {
        Expr::Zero => Value::Known(0),
        Expr::Term(s) => one(s),
        Expr::Min(v) => {
            let mut best: Option<usize> = None;
            for s in v {
                match one(s) {
                    Value::Known(x) => best = Some(best.map_or(x, |b| b.min(x))),
                    other => return other,
                }
            }
            Value::Known(best.expect("min over at least one term"))
        }
    }
}

fn judge(r: Relation, values: &HashMap<String, Value>) -> Check {
    let mut check = Check {
        relation: r.name,
        verdict: Verdict::Skipped,
        lhs: None,
        rhs: None,
        note: None,
    };
    match r.hyp {
        Hyp::Holds => {}
        Hyp::Fails(why) => {
            check.note = Some(why);
            return check;
        }
        Hyp::Unknown(why) => {
            check.verdict = Verdict::Inconclusive;
            check.note = Some(why);
            return check;
        }
    }
    let (a, b) = (value_of(&r.lhs, values), value_of(&r.rhs, values));
    if let Value::Known(x) = a {
        check.lhs = Some(x);
    }
    if let Value::Known(y) = b {
        check.rhs = Some(y);
    }
    match (a, b) {
        (Value::Known(x), Value::Known(y)) => {
            let ok = if r.equal { x == y } else { x <= y };
            check.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        }
        (Value::Skip(why), _) | (_, Value::Skip(why)) => check.note = Some(why),
        (Value::Unknown(why), _) | (_, Value::Unknown(why)) => {
            check.verdict = Verdict::Inconclusive;
            check.note = Some(why);
        }
    }
    check
}

/// One-shot audit with a fresh memo.
pub fn audit(
    l: &Arc<SimplicialComplex>,
    phi: Option<&SimplicialMap>,
    n_max: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<AuditReport> {
    Auditor::new(*opts).audit(l, phi, None, n_max, seed)
}

/// Audits every corpus complex, every corpus fibration over its domain and
/// every composable pair, in that order.
pub fn audit_corpus(auditor: &mut Auditor, n_max: usize, seed: u64) -> Result<Vec<(String, AuditReport)>> {
    let entries = corpus::corpus();
    let fibs = corpus::fibrations(&entries)?;
    let mut out = Vec::new();
    for e in &entries {
        out.push((e.name.clone(), auditor.audit(&e.complex, None, None, n_max, seed)?));
    }
    for f in &fibs {
        out.push((f.name.clone(), auditor.audit(f.map.domain(), Some(&f.map), None, n_max, seed)?));
    }
    for (i, j) in corpus::composable_pairs(&fibs) {
        let (a, b) = (&fibs[i], &fibs[j]);
        let name = format!("{} then {}", a.name, b.name);
        out.push((name, auditor.audit(a.map.domain(), Some(&a.map), Some(&b.map), n_max, seed)?));
    }
    Ok(out)
}
