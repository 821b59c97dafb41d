//! Rayon pool with every core against a one-thread pool running the same
//! code. Build with `--no-default-features` to time the sequential fallback
//! of `par_map` itself.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use insep_core::corpus::{gen_corpus, Profile};
use insep_core::groebner::ideal_groebner;
use insep_core::pipeline::{run_stages, Options};
use insep_core::poly::{parse_poly, MultiPoly, PolyRing};
use insep_core::tower::TowerField;
use rayon::prelude::*;
use std::time::Duration;

fn cyclic(n: usize, p: u32) -> Vec<MultiPoly> {
    let k = TowerField::rational(p, vec![]).unwrap();
    let vars: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let ring = PolyRing::affine(k, vars.clone());
    let mut out = Vec::new();
    for len in 1..n {
        let terms: Vec<String> = (0..n).map(|i| (0..len).map(|j| vars[(i + j) % n].clone()).collect::<Vec<_>>().join("*")).collect();
        out.push(parse_poly(&ring, &terms.join(" + ")).unwrap());
    }
    out.push(parse_poly(&ring, &format!("{} - 1", vars.join("*"))).unwrap());
    out
}

fn pools() -> Vec<(usize, rayon::ThreadPool)> {
    let all = rayon::current_num_threads().max(2);
    [1, all].into_iter().map(|n| (n, rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap())).collect()
}

fn groebner(c: &mut Criterion) {
    let gens = cyclic(5, 32003);
    let ring = gens[0].ring().clone();
    let mut g = c.benchmark_group("groebner_cyclic5");
    g.sample_size(10).measurement_time(Duration::from_secs(10));
    for (n, pool) in pools() {
        g.bench_with_input(BenchmarkId::new("threads", n), &n, |b, _| {
            b.iter(|| pool.install(|| ideal_groebner(&gens, &ring).unwrap()))
        });
    }
    g.finish();
}

fn corpus(c: &mut Criterion) {
    let inputs: Vec<_> = gen_corpus(11, 8, Profile::FermatProduct, &[2, 3])
        .unwrap()
        .into_iter()
        .map(|i| i.input().unwrap())
        .collect();
    let opts = Options::default();
    let mut g = c.benchmark_group("run_stages_corpus8");
    g.sample_size(10).measurement_time(Duration::from_secs(10));
    g.bench_function("sequential", |b| {
        b.iter(|| inputs.iter().map(|i| run_stages(&i.x, i.target(), &opts).is_ok()).filter(|&ok| ok).count())
    });
    g.bench_function("parallel", |b| {
        b.iter(|| inputs.par_iter().map(|i| run_stages(&i.x, i.target(), &opts).is_ok()).filter(|&ok| ok).count())
    });
    g.finish();
}

criterion_group!(benches, groebner, corpus);
criterion_main!(benches);
