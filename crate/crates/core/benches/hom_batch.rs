//! Sequential against data-parallel evaluation of the batched Hom workloads.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gentle_core::exceptional::mouth_objects_with;
use gentle_core::hom::graded_profile_with;
use gentle_core::prelude::*;
use gentle_core::random::{random_corpus, RandomParams};
use gentle_core::words::parse_band;
use std::hint::black_box;

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

fn fixture(name: &str) -> GentleAlgebra {
    let path = format!("{}/../../fixtures/{name}.gentle", env!("CARGO_MANIFEST_DIR"));
    load(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn mouth_scan(c: &mut Criterion) {
    let corpus = random_corpus(20261016, 8, &RandomParams::default());
    let mut group = c.benchmark_group("mouth_scan");
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                for alg in &corpus {
                    black_box(mouth_objects_with(alg, mode).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn band_profile(c: &mut Criterion) {
    let pent = fixture("pent");
    let band = parse_band(&pent, "d^-1, e^-1, f^-1, c, b, a").unwrap();
    let e = unfold_band(&pent, &band, 0, Q::from_integer(1)).unwrap();
    let mut group = c.benchmark_group("band_profile");
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(graded_profile_with(&pent, &e, &e, mode)))
        });
    }
    group.finish();
}

fn search(c: &mut Criterion) {
    let pent = fixture("pent");
    let bounds = SearchBounds::default_for(&pent).unwrap();
    let mut group = c.benchmark_group("search_pent");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(brute_force_search(&pent, bounds, mode).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, mouth_scan, band_profile, search);
criterion_main!(benches);
