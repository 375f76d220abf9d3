use std::hint::black_box;

use arthurlab::geometry::{closure_compare, rank_entry_closed_form, rank_triangles};
use arthurlab::params::phi_of;
use arthurlab::HalfInt;
use arthurlab_bench::{random_families, so9_params};
use criterion::{criterion_group, criterion_main, Criterion};

fn triangles(c: &mut Criterion) {
    let phis: Vec<_> = so9_params().iter().map(phi_of).collect();
    c.bench_function("so9-rank-triangles", |b| {
        b.iter(|| phis.iter().for_each(|p| drop(black_box(rank_triangles(p).unwrap()))))
    });
    let fams: Vec<Vec<_>> = random_families(5, 16, 3).iter().map(|f| f.iter().map(phi_of).collect()).collect();
    c.bench_function("random-closure-compare", |b| {
        b.iter(|| {
            for f in &fams {
                for p in f {
                    black_box(closure_compare(&f[0], p).unwrap());
                }
            }
        })
    });
}

fn closed_form(c: &mut Criterion) {
    let h = HalfInt::half;
    c.bench_function("closed-form-entry", |b| {
        b.iter(|| {
            let mut s = 0;
            for x in -6..=6 {
                for y in -6..=x {
                    s += rank_entry_closed_form(h(5), h(-1), black_box(h(x)), h(y));
                }
            }
            s
        })
    });
}

criterion_group!(benches, triangles, closed_form);
criterion_main!(benches);
