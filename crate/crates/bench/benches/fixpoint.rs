use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hkbfs_core::engine::{alternating_fixpoint, iterated_fixpoint, GroundKb};
use hkbfs_core::ground::DEFAULT_MAX_GROUND_RULES;
use hkbfs_core::oracle::{random_kb, RandomLimits};
use hkbfs_core::{parse_kb, HybridKb};

fn spillover() -> HybridKb {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/spillover.hkb");
    parse_kb(&std::fs::read_to_string(path).unwrap()).unwrap().kb
}

fn iterated(c: &mut Criterion) {
    let kb = spillover();
    let mut group = c.benchmark_group("spillover_ifp");
    for k in [2, 3, 4] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            // Fresh grounding each time so the entailment cache starts cold.
            b.iter(|| {
                let g = GroundKb::new(&kb, k, DEFAULT_MAX_GROUND_RULES).unwrap();
                black_box(iterated_fixpoint(&g).unwrap().iterations())
            })
        });
    }
    group.finish();
}

fn corpus(c: &mut Criterion) {
    let kbs: Vec<HybridKb> = (0..50).map(|s| random_kb(s, RandomLimits::default())).collect();
    c.bench_function("corpus_afp_50", |b| {
        b.iter(|| {
            for kb in &kbs {
                let g = GroundKb::new(kb, 0, DEFAULT_MAX_GROUND_RULES).unwrap();
                black_box(alternating_fixpoint(&g).iterations());
            }
        })
    });
}

criterion_group!(benches, iterated, corpus);
criterion_main!(benches);
