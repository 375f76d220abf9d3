use arthurlab_cli::fixtures::Corpus;
use arthurlab_cli::suites::{run_suite, Suite};
use criterion::{criterion_group, criterion_main, Criterion};

fn suites(c: &mut Criterion) {
    let corpus = Corpus::embedded().unwrap();
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    for suite in [Suite::Monotonicity, Suite::Duality, Suite::PartitionTriangle, Suite::Sandwich, Suite::RoundTrip] {
        g.bench_function(format!("{suite}-100"), |b| b.iter(|| assert!(run_suite(suite, 1, 100, &corpus).ok())));
    }
    for suite in [Suite::Examples, Suite::EmsChain, Suite::ArthurSteps] {
        g.bench_function(suite.to_string(), |b| b.iter(|| assert!(run_suite(suite, 1, usize::MAX, &corpus).ok())));
    }
    g.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
