//! Seeded randomized property suites over small complexes and maps.
//!
//! Each trial draws its own generator from the suite seed and trial index,
//! so trials are independent, may run in parallel and reproduce one by
//! one. A failing suite reports the smallest failing instance it saw.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::collapse::{core, is_strongly_collapsible};
use crate::complex::SimplicialComplex;
use crate::contiguity::{same_contiguity_class, ClassVerdict};
use crate::distance::{sd, sd_oracle};
use crate::error::{Error, Result};
use crate::io::{write_complex, write_map};
use crate::label::VertexLabel;
use crate::map::SimplicialMap;
use crate::random::{random_complex, random_contiguity_step, random_map, rng, RandomInstanceSpec};
use crate::{par, SearchOptions};

pub const SUITES: &[&str] = &[
    "sd-permutation",
    "sd-monotonicity",
    "sd-zero",
    "class-invariance",
    "composition-bounds",
    "core-reduction-soundness",
    "strong-collapsible-zero",
    "oracle-equivalence",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    /// Trials where a search ran out of budget.
    pub inconclusive: usize,
    pub counterexample: Option<String>,
}

impl SuiteOutcome {
    pub fn ok(&self) -> bool {
        self.failed == 0 && self.inconclusive == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub outcomes: Vec<SuiteOutcome>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.outcomes.iter().all(SuiteOutcome::ok)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            writeln!(
                f,
                "SUITE {} {} trials={} passed={} failed={} inconclusive={}",
                o.name,
                if o.ok() { "PASS" } else { "FAIL" },
                o.trials,
                o.passed,
                o.failed,
                o.inconclusive
            )?;
            if let Some(c) = &o.counterexample {
                for line in c.lines() {
                    writeln!(f, "  {line}")?;
                }
            }
        }
        Ok(())
    }
}

enum Trial {
    Pass,
    Fail(Instance),
    Inconclusive,
}

/// A failing instance: the complexes and maps involved, plus what went wrong.
struct Instance {
    size: usize,
    text: String,
}

fn instance(what: &str, maps: &[&SimplicialMap]) -> Instance {
    let dom = maps[0].domain();
    let mut text = format!("{what}\n-- domain.cplx\n{}", write_complex(dom));
    let mut size = dom.vertex_count() + dom.facet_count();
    let mut seen: Vec<&Arc<SimplicialComplex>> = vec![dom];
    for (i, m) in maps.iter().enumerate() {
        for k in [m.domain(), m.codomain()] {
            if !seen.iter().any(|s| ***s == **k) {
                text.push_str(&format!("-- complex{}.cplx\n{}", seen.len(), write_complex(k)));
                size += k.vertex_count() + k.facet_count();
                seen.push(k);
            }
        }
        let d = seen.iter().position(|s| ***s == **m.domain()).unwrap_or(0);
        let c = seen.iter().position(|s| ***s == **m.codomain()).unwrap_or(0);
        text.push_str(&format!("-- map{i}.smap\n{}", write_map(m, &format!("complex{d}.cplx"), &format!("complex{c}.cplx"))));
    }
    Instance { size, text }
}

fn verdict(ok: bool, what: impl FnOnce() -> Instance) -> Trial {
    if ok {
        Trial::Pass
    } else {
        Trial::Fail(what())
    }
}

fn spec(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> RandomInstanceSpec {
    RandomInstanceSpec {
        vertex_count: rng.gen_range(lo..=hi),
        facet_probability: *[0.3, 0.5].choose(rng).unwrap(),
        require_connected: true,
    }
}

fn complex(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> Arc<SimplicialComplex> {
    let s = spec(rng, lo, hi);
    Arc::new(random_complex(&s, rng).expect("connected complexes on few vertices exist"))
}

/// Between `lo` and `hi` random maps.
fn maps(
    rng: &mut ChaCha8Rng,
    dom: &Arc<SimplicialComplex>,
    cod: &Arc<SimplicialComplex>,
    lo: usize,
    hi: usize,
) -> Vec<SimplicialMap> {
    let m = rng.gen_range(lo..=hi);
    (0..m)
        .map(|_| random_map(dom, cod, rng).expect("constant maps always exist"))
        .collect()
}

/// The cone over `k` with a fresh apex; cones are strongly collapsible.
fn cone(k: &SimplicialComplex) -> Arc<SimplicialComplex> {
    let apex = VertexLabel::atom("apex").expect("valid label");
    let facets = k
        .facets()
        .iter()
        .map(|f| {
            let mut s: Vec<VertexLabel> = f.iter().map(|&v| k.label(v).clone()).collect();
            s.push(apex.clone());
            s
        })
        .collect();
    Arc::new(SimplicialComplex::build(facets).expect("cone of a complex"))
}

fn value(maps: &[SimplicialMap], opts: &SearchOptions) -> Result<usize> {
    sd(maps, opts).map(|o| o.value)
}

/// Runs `f` and turns a budget error into an inconclusive trial.
fn guarded(f: impl FnOnce() -> Result<Trial>) -> Trial {
    match f() {
        Ok(t) => t,
        Err(Error::BudgetExhausted(_)) => Trial::Inconclusive,
        Err(e) => Trial::Fail(Instance {
            size: usize::MAX,
            text: format!("unexpected error: {e}"),
        }),
    }
}

fn class(f: &SimplicialMap, g: &SimplicialMap, opts: &SearchOptions) -> Result<bool> {
    match same_contiguity_class(f, g, opts)? {
        ClassVerdict::Equivalent(_) => Ok(true),
        ClassVerdict::NotEquivalent { .. } => Ok(false),
        ClassVerdict::Unknown { budget } => Err(Error::BudgetExhausted(format!("{budget} states"))),
    }
}

fn trial(name: &str, r: &mut ChaCha8Rng, opts: &SearchOptions) -> Trial {
    guarded(|| {
        Ok(match name {
            "sd-permutation" => {
                let (a, b) = (complex(r, 2, 5), complex(r, 2, 5));
                let fs = maps(r, &a, &b, 2, 4);
                let mut shuffled = fs.clone();
                shuffled.shuffle(r);
                let (x, y) = (value(&fs, opts)?, value(&shuffled, opts)?);
                verdict(x == y, || {
                    instance(&format!("sd {x} but {y} after permuting"), &fs.iter().collect::<Vec<_>>())
                })
            }
            "sd-monotonicity" => {
                let (a, b) = (complex(r, 2, 5), complex(r, 2, 5));
                let fs = maps(r, &a, &b, 3, 4);
                let k = r.gen_range(2..fs.len());
                let (x, y) = (value(&fs[..k], opts)?, value(&fs, opts)?);
                verdict(x <= y, || {
                    instance(&format!("sd of the first {k} maps is {x} > {y}"), &fs.iter().collect::<Vec<_>>())
                })
            }
            "sd-zero" => {
                let (a, b) = (complex(r, 2, 5), complex(r, 2, 5));
                let mut fs = maps(r, &a, &b, 2, 3);
                // Bias towards tuples that are equivalent.
                if r.gen_bool(0.5) {
                    let mut g = fs[0].clone();
                    for _ in 0..r.gen_range(1..=4) {
                        g = random_contiguity_step(&g, r);
                    }
                    fs[1] = g;
                }
                let zero = value(&fs, opts)? == 0;
                let mut pairwise = true;
                for i in 0..fs.len() {
                    for j in i + 1..fs.len() {
                        pairwise &= class(&fs[i], &fs[j], opts)?;
                    }
                }
                verdict(zero == pairwise, || {
                    instance(&format!("sd = 0 is {zero}, pairwise equivalence is {pairwise}"), &fs.iter().collect::<Vec<_>>())
                })
            }
            "class-invariance" => {
                let (a, b) = (complex(r, 2, 5), complex(r, 2, 5));
                let fs = maps(r, &a, &b, 2, 2);
                let mut moved = fs.clone();
                for _ in 0..r.gen_range(1..=5) {
                    let i = r.gen_range(0..moved.len());
                    moved[i] = random_contiguity_step(&moved[i], r);
                }
                let (x, y) = (value(&fs, opts)?, value(&moved, opts)?);
                verdict(x == y, || {
                    let all: Vec<&SimplicialMap> = fs.iter().chain(&moved).collect();
                    instance(&format!("sd {x} before contiguity steps, {y} after"), &all)
                })
            }
            "composition-bounds" => {
                let (a, b, c) = (complex(r, 2, 4), complex(r, 2, 4), complex(r, 2, 4));
                if r.gen_bool(0.5) {
                    let fs = maps(r, &a, &b, 2, 2);
                    let g = random_map(&b, &c, r)?;
                    let comp = fs
                        .iter()
                        .map(|f| SimplicialMap::compose(&g, f))
                        .collect::<Result<Vec<_>>>()?;
                    let (x, y) = (value(&comp, opts)?, value(&fs, opts)?);
                    verdict(x <= y, || {
                        instance(&format!("left composite {x} > {y}"), &[&fs[0], &fs[1], &g])
                    })
                } else {
                    let h = random_map(&a, &b, r)?;
                    let fs = maps(r, &b, &c, 2, 2);
                    let comp = fs
                        .iter()
                        .map(|f| SimplicialMap::compose(f, &h))
                        .collect::<Result<Vec<_>>>()?;
                    let (x, y) = (value(&comp, opts)?, value(&fs, opts)?);
                    verdict(x <= y, || {
                        instance(&format!("right composite {x} > {y}"), &[&h, &fs[0], &fs[1]])
                    })
                }
            }
            "core-reduction-soundness" => {
                let (a, b) = (complex(r, 2, 5), complex(r, 2, 5));
                let fs = maps(r, &a, &b, 2, 2);
                let plain = SearchOptions {
                    reduce_cores: false,
                    ..*opts
                };
                let reduced = SearchOptions {
                    reduce_cores: true,
                    ..*opts
                };
                let incl = core(&a).inclusion;
                let on_core = [SimplicialMap::compose(&fs[0], &incl)?, SimplicialMap::compose(&fs[1], &incl)?];
                let answers = [
                    class(&fs[0], &fs[1], &plain)?,
                    class(&fs[0], &fs[1], &reduced)?,
                    class(&on_core[0], &on_core[1], &plain)?,
                ];
                let (x, y) = (value(&fs, &plain)?, value(&fs, &reduced)?);
                verdict(answers.iter().all(|&c| c == answers[0]) && x == y, || {
                    instance(
                        &format!("class answers {answers:?}, sd {x} unreduced and {y} reduced"),
                        &[&fs[0], &fs[1]],
                    )
                })
            }
            "strong-collapsible-zero" => {
                let base = complex(r, 1, 4);
                let other = complex(r, 2, 5);
                let (a, b) = if r.gen_bool(0.5) { (cone(&base), other) } else { (other, cone(&base)) };
                let fs = maps(r, &a, &b, 2, 3);
                let collapsible = is_strongly_collapsible(&a) || is_strongly_collapsible(&b);
                let x = value(&fs, opts)?;
                verdict(collapsible && x == 0, || {
                    instance(&format!("collapsible {collapsible}, sd {x}"), &fs.iter().collect::<Vec<_>>())
                })
            }
            "oracle-equivalence" => {
                let (a, b) = (complex(r, 2, 5), complex(r, 2, 5));
                let fs = maps(r, &a, &b, 2, 3);
                let out = sd(&fs, opts)?;
                let o = sd_oracle(&fs, a.facet_count())?;
                verdict(o == Some(out.value), || {
                    instance(&format!("sd {} but oracle {o:?}", out.value), &fs.iter().collect::<Vec<_>>())
                })
            }
            _ => unreachable!("suite names are checked up front"),
        })
    })
}

fn suite_seed(name: &str, seed: u64) -> u64 {
    // FNV-1a, so that each suite has its own fixed stream.
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325_u64 ^ seed, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

pub fn run_suite(name: &str, trials: usize, seed: u64, opts: &SearchOptions) -> Result<SuiteOutcome> {
    if !SUITES.contains(&name) {
        return Err(Error::GenerationFailed(format!("unknown suite {name:?}")));
    }
    let base = suite_seed(name, seed);
    let results = par::map_range(trials, |i| trial(name, &mut rng(base.wrapping_add(i as u64)), opts));
    let mut out = SuiteOutcome {
        name: name.into(),
        trials,
        passed: 0,
        failed: 0,
        inconclusive: 0,
        counterexample: None,
    };
    let mut smallest: Option<(usize, usize, Instance)> = None;
    for (i, t) in results.into_iter().enumerate() {
        match t {
            Trial::Pass => out.passed += 1,
            Trial::Inconclusive => out.inconclusive += 1,
            Trial::Fail(inst) => {
                out.failed += 1;
                if smallest.as_ref().is_none_or(|(s, _, _)| inst.size < *s) {
                    smallest = Some((inst.size, i, inst));
                }
            }
        }
    }
    out.counterexample = smallest.map(|(_, i, inst)| format!("trial {i}: {}", inst.text));
    Ok(out)
}

/// Runs the named suites in the given order; an empty list means all.
pub fn run_property_suite(names: &[&str], trials: usize, seed: u64, opts: &SearchOptions) -> Result<SuiteReport> {
    let names: Vec<&str> = if names.is_empty() { SUITES.to_vec() } else { names.to_vec() };
    let outcomes = names
        .iter()
        .map(|n| run_suite(n, trials, seed, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport { outcomes })
}
