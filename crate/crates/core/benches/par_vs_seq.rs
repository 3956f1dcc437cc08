use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qf2_core::invariants::InvariantTable;
use qf2_core::localization::{contributions, Family, Method};
use qf2_core::losev_manin::cont_b_grid;
use qf2_core::Exec;

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn loci(c: &mut Criterion) {
    let mut g = c.benchmark_group("assembled loci, dD4");
    g.sample_size(10);
    for d in [6u32, 8] {
        for (name, exec) in STRATEGIES {
            g.bench_with_input(BenchmarkId::new(name, d), &d, |b, &d| {
                b.iter(|| contributions(Family::DD4, d, Method::Assembled, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn table(c: &mut Criterion) {
    let mut g = c.benchmark_group("localized invariant table");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        g.bench_function(name, |b| b.iter(|| InvariantTable::localized(8, Method::Assembled, exec).unwrap()));
    }
    g.finish();
}

fn base_grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("Cont_B grid b<=5 e<=4");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        g.bench_function(name, |b| b.iter(|| cont_b_grid(5, 4, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, loci, table, base_grid);
criterion_main!(benches);
