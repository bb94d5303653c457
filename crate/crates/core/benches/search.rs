//! Sequential against parallel execution on the data-parallel kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use listsep::lattice::UniformLattice;
use listsep::search::{find_counterexample, sep_grid, SearchOptions, SepQuery};
use listsep::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn counterexample(c: &mut Criterion) {
    let mut g = c.benchmark_group("find_counterexample");
    g.sample_size(10);
    // (n, a, b, c) at the boundary c = sep + 1 and one below it
    for (n, a, b, cc) in [(5, 6, 3, 2), (5, 6, 3, 1), (4, 8, 4, 3)] {
        for (name, exec) in MODES {
            let opts = SearchOptions { exec, ..SearchOptions::default() };
            g.bench_with_input(BenchmarkId::new(name, format!("{n},{a},{b},{cc}")), &opts, |bch, o| {
                bch.iter(|| find_counterexample(black_box(n), a, b, cc, o).unwrap())
            });
        }
    }
    g.finish();
}

fn grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("sep_grid_k4");
    g.sample_size(10);
    let queries: Vec<SepQuery> =
        (1..=3).flat_map(|b| (b..=3 * b).map(move |a| SepQuery::new(4, a, b).unwrap())).collect();
    for (name, exec) in MODES {
        let opts = SearchOptions { exec, ..SearchOptions::default() };
        g.bench_function(name, |bch| bch.iter(|| sep_grid(black_box(&queries), &opts)));
    }
    g.finish();
}

fn lattice(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattice_count");
    g.sample_size(10);
    for a in [5u32, 7] {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, format!("n=4,a={a}")), &a, |bch, &a| {
                bch.iter(|| UniformLattice::new(4, black_box(a)).count(exec))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, counterexample, grid, lattice);
criterion_main!(benches);
