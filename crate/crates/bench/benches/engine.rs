use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hl_bench::{census, derive_inputs, word_graph};
use hl_core::fixtures::{hgr1, hgr1_example_graph, sgr};
use hl_core::{hl_member, Prover};

fn canonical_form(c: &mut Criterion) {
    let graphs = census();
    c.bench_function("canonical_code/census_1_to_3", |b| {
        b.iter(|| graphs.iter().map(|g| g.canonical_code().len()).sum::<usize>())
    });
}

fn membership(c: &mut Criterion) {
    let g = sgr();
    let mut group = c.benchmark_group("sgr_member");
    for w in ["abb", "aabbb", "aaabbbb", "abababa"] {
        let graph = word_graph(w);
        // A fresh memo per iteration, so the search itself is measured.
        group.bench_with_input(BenchmarkId::from_parameter(w), &graph, |b, graph| {
            b.iter(|| hl_member(&g, black_box(graph), &Prover::new()).unwrap().is_member())
        });
    }
    group.finish();
    let (g1, fig) = (hgr1(), hgr1_example_graph());
    c.bench_function("hgr1_member/example", |b| b.iter(|| hl_member(&g1, black_box(&fig), &Prover::new()).unwrap().is_member()));
}

fn derive(c: &mut Criterion) {
    let mut group = c.benchmark_group("derive");
    for (name, s) in derive_inputs() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, s| {
            b.iter(|| Prover::new().decide(black_box(s)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, canonical_form, membership, derive);
criterion_main!(benches);
