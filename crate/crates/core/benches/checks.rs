//! Sequential against rayon-parallel evaluation of the heaviest checks.
//!
//! Build with `--no-default-features` to see the parallel variant fall back
//! to a single thread.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use decomp_species::coalg::{check_coassociativity, IncidenceBialgebra};
use decomp_species::decomp::{build, check_decomposition, BuildOptions};
use decomp_species::species::Species;
use decomp_species::Exec;

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn decomposition(c: &mut Criterion) {
    let mut group = c.benchmark_group("decomposition");
    group.sample_size(10);
    for species in [Species::posets(), Species::graphs()] {
        let ds = build(&species, &BuildOptions::new(3, 3).with_bound(2)).expect("build");
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, species.tag()), &ds, |b, ds| {
                b.iter(|| black_box(check_decomposition(ds.simplicial(), exec).expect("check")))
            });
        }
    }
    group.finish();
}

fn coassociativity(c: &mut Criterion) {
    let mut group = c.benchmark_group("coassociativity");
    group.sample_size(10);
    let alg = IncidenceBialgebra::new(&Species::forests(), 6, 1).expect("basis");
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::new(name, "forest<=6"), |b| {
            b.iter(|| black_box(check_coassociativity(&alg, exec).expect("check")))
        });
    }
    group.finish();
}

criterion_group!(benches, decomposition, coassociativity);
criterion_main!(benches);
