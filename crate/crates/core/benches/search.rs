//! Exact searches with the data-parallel core against a sequential run.
//!
//! With the `parallel` feature each workload runs twice: on rayon's global
//! pool and inside a one-thread pool. `cargo bench --no-default-features`
//! measures the plain-iterator fallback.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use discrete_tc::corpus::fig1;
use discrete_tc::invariants::{tc, tc_map};
use discrete_tc::par::is_parallel;
use discrete_tc::random::{random_map, rng};
use discrete_tc::{sd, SearchOptions, SimplicialComplex, SimplicialMap};

fn k(f: &[&[&str]]) -> Arc<SimplicialComplex> {
    Arc::new(SimplicialComplex::from_tokens(f).unwrap())
}

type Workload = (&'static str, Box<dyn Fn() -> usize + Send + Sync>);

fn workloads() -> Vec<Workload> {
    let opts = SearchOptions::default();
    let c3 = k(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
    let sphere = k(&[&["a", "b", "c"], &["a", "b", "d"], &["a", "c", "d"], &["b", "c", "d"]]);
    let (_, _, phi) = fig1();
    let mut r = rng(11);
    let c4 = k(&[&["a", "b"], &["b", "c"], &["c", "d"], &["a", "d"]]);
    let pairs: Vec<Vec<SimplicialMap>> = (0..40)
        .map(|_| vec![random_map(&sphere, &c4, &mut r).unwrap(), random_map(&sphere, &c4, &mut r).unwrap()])
        .collect();
    vec![
        ("tc_cycle3", Box::new(move || tc(&c3, 2, &opts).unwrap().value)),
        ("tc_sphere", Box::new(move || tc(&sphere, 2, &opts).unwrap().value)),
        ("tc_map_figure", Box::new(move || tc_map(&phi, &opts).unwrap().value)),
        (
            "sd_random_pairs",
            Box::new(move || pairs.iter().map(|p| sd(p, &opts).unwrap().value).sum()),
        ),
    ]
}

fn bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    let mode = if is_parallel() { "parallel" } else { "sequential" };
    #[cfg(feature = "parallel")]
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    for (name, run) in workloads() {
        g.bench_function(BenchmarkId::new(name, mode), |b| b.iter(&run));
        #[cfg(feature = "parallel")]
        g.bench_function(BenchmarkId::new(name, "one-thread"), |b| b.iter(|| single.install(&run)));
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
