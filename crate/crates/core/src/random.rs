//! Seeded random complexes and simplicial maps.
//!
//! A complex on `v0 .. v{n-1}` is drawn by keeping each vertex subset of
//! size at least two with probability `facet_probability`; vertices left
//! uncovered become isolated points. The maximal kept sets are the facets.
//! Maps are built by randomized backtracking, so they are simplicial by
//! construction.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::label::VertexLabel;
use crate::map::SimplicialMap;

pub const MAX_RANDOM_VERTICES: usize = 6;
pub const GENERATION_ATTEMPTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomInstanceSpec {
    pub vertex_count: usize,
    pub facet_probability: f64,
    pub require_connected: bool,
}

impl RandomInstanceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.vertex_count == 0 || self.vertex_count > MAX_RANDOM_VERTICES {
            return Err(Error::GenerationFailed(format!(
                "vertex count {} outside 1..={MAX_RANDOM_VERTICES}",
                self.vertex_count
            )));
        }
        if !(self.facet_probability > 0.0 && self.facet_probability <= 1.0) {
            return Err(Error::GenerationFailed(format!(
                "facet probability {} outside (0, 1]",
                self.facet_probability
            )));
        }
        Ok(())
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn generate_random(spec: &RandomInstanceSpec, seed: u64) -> Result<SimplicialComplex> {
    random_complex(spec, &mut rng(seed))
}

pub fn random_complex<R: Rng>(spec: &RandomInstanceSpec, rng: &mut R) -> Result<SimplicialComplex> {
    spec.validate()?;
    let n = spec.vertex_count;
    let labels: Vec<VertexLabel> = (0..n).map(|i| VertexLabel::atom(&format!("v{i}")).unwrap()).collect();
    for _ in 0..GENERATION_ATTEMPTS {
        let mut kept: Vec<Vec<VertexLabel>> = Vec::new();
        let mut covered = vec![false; n];
        for mask in 1u32..(1 << n) {
            if mask.count_ones() < 2 || !rng.gen_bool(spec.facet_probability) {
                continue;
            }
            let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            for &i in &set {
                covered[i] = true;
            }
            kept.push(set.into_iter().map(|i| labels[i].clone()).collect());
        }
        for (i, c) in covered.iter().enumerate() {
            if !c {
                kept.push(vec![labels[i].clone()]);
            }
        }
        let k = SimplicialComplex::build(kept)?;
        if !spec.require_connected || k.is_edge_path_connected() {
            return Ok(k);
        }
    }
    Err(Error::GenerationFailed(format!(
        "no connected complex on {n} vertices after {GENERATION_ATTEMPTS} attempts"
    )))
}

/// A uniformly shuffled depth-first search for a simplicial map; one
/// always exists because constant maps are simplicial.
pub fn random_map<R: Rng>(
    dom: &Arc<SimplicialComplex>,
    cod: &Arc<SimplicialComplex>,
    rng: &mut R,
) -> Result<SimplicialMap> {
    let n = dom.vertex_count();
    let mut images = vec![u32::MAX; n];
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    order.shuffle(rng);
    if !assign(dom, cod, &order, 0, &mut images, rng) {
        return Err(Error::GenerationFailed("codomain has no vertices".into()));
    }
    SimplicialMap::from_images(dom.clone(), cod.clone(), images)
}

fn assign<R: Rng>(
    dom: &SimplicialComplex,
    cod: &SimplicialComplex,
    order: &[VertexId],
    depth: usize,
    images: &mut [u32],
    rng: &mut R,
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    let mut choices: Vec<u32> = (0..cod.vertex_count() as u32).collect();
    choices.shuffle(rng);
    for w in choices {
        images[v as usize] = w;
        let fits = dom.incident_facets(v).iter().all(|&f| {
            let mut img: Vec<u32> = dom.facets()[f as usize]
                .iter()
                .map(|&u| images[u as usize])
                .filter(|&x| x != u32::MAX)
                .collect();
            img.sort_unstable();
            img.dedup();
            cod.contains_ids(&img)
        });
        if fits && assign(dom, cod, order, depth + 1, images, rng) {
            return true;
        }
    }
    images[v as usize] = u32::MAX;
    false
}

/// A map contiguous to `f` that differs from it at one random vertex, or
/// `f` itself when no vertex can move.
pub fn random_contiguity_step<R: Rng>(f: &SimplicialMap, rng: &mut R) -> SimplicialMap {
    let dom = f.domain();
    let cod = f.codomain();
    let img = f.images();
    let mut moves = Vec::new();
    for v in 0..dom.vertex_count() as VertexId {
        for w in 0..cod.vertex_count() as u32 {
            if w == img[v as usize] {
                continue;
            }
            let ok = dom.incident_facets(v).iter().all(|&s| {
                let mut u: Vec<u32> = dom.facets()[s as usize].iter().map(|&x| img[x as usize]).collect();
                u.push(w);
                u.sort_unstable();
                u.dedup();
                cod.contains_ids(&u)
            });
            if ok {
                moves.push((v, w));
            }
        }
    }
    match moves.choose(rng) {
        None => f.clone(),
        Some(&(v, w)) => {
            let mut next = img.to_vec();
            next[v as usize] = w;
            SimplicialMap::from_images(dom.clone(), cod.clone(), next)
                .expect("a one-vertex move inside the star stays simplicial")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contiguity::contiguous;

    fn spec(n: usize) -> RandomInstanceSpec {
        RandomInstanceSpec {
            vertex_count: n,
            facet_probability: 0.3,
            require_connected: true,
        }
    }

    #[test]
    fn same_seed_same_complex() {
        for seed in 0..20 {
            assert_eq!(generate_random(&spec(5), seed).unwrap(), generate_random(&spec(5), seed).unwrap());
        }
    }

    #[test]
    fn connected_when_required() {
        for seed in 0..50 {
            assert!(generate_random(&spec(6), seed).unwrap().is_edge_path_connected());
        }
    }

    #[test]
    fn bad_specs_rejected() {
        assert!(generate_random(&spec(7), 0).is_err());
        let zero = RandomInstanceSpec {
            facet_probability: 0.0,
            ..spec(3)
        };
        assert!(generate_random(&zero, 0).is_err());
    }

    #[test]
    fn maps_and_steps_are_valid() {
        let mut r = rng(7);
        for _ in 0..200 {
            let a = Arc::new(random_complex(&spec(5), &mut r).unwrap());
            let b = Arc::new(random_complex(&spec(4), &mut r).unwrap());
            let f = random_map(&a, &b, &mut r).unwrap();
            let g = random_contiguity_step(&f, &mut r);
            assert!(contiguous(&f, &g).unwrap());
        }
    }
}
