use std::hint::black_box;

use arthurlab::orders::{compare, poset_edges, OrderKind};
use arthurlab_bench::{random_families, so9_params};
use criterion::{criterion_group, criterion_main, Criterion};

const KINDS: [OrderKind; 4] = [OrderKind::A, OrderKind::D, OrderKind::O, OrderKind::C];

fn so9_poset(c: &mut Criterion) {
    let ps = so9_params();
    let mut g = c.benchmark_group("so9-poset");
    for kind in KINDS {
        g.bench_function(kind.to_string(), |b| b.iter(|| poset_edges(black_box(&ps), kind).unwrap()));
    }
    g.finish();
}

fn random_pairs(c: &mut Criterion) {
    let fams = random_families(11, 16, 3);
    let mut g = c.benchmark_group("random-compare");
    for kind in KINDS {
        g.bench_function(kind.to_string(), |b| {
            b.iter(|| {
                for f in &fams {
                    for p in f {
                        black_box(compare(&f[0], p, kind).unwrap());
                    }
                }
            })
        });
    }
    g.finish();
}

criterion_group!(benches, so9_poset, random_pairs);
criterion_main!(benches);
