//! Sequential versus rayon sweeps over seeded SL(3, Z) corpora.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use tormono::classify::classify_stable;
use tormono::exactmat::Unimodular;
use tormono::monodromy3::StableBudget;
use tormono::oracle::random_slnz;
use tormono::sweep::{classify_all, map_ordered, Execution};

fn corpus(n: u64) -> Vec<Unimodular> {
    (0..n).map(|s| random_slnz(3, 10 + (s % 9) as usize, s)).collect()
}

fn classify(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify_all");
    for n in [256u64, 2048] {
        let ms = corpus(n);
        g.throughput(Throughput::Elements(n));
        for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            g.bench_with_input(BenchmarkId::new(name, n), &ms, |b, ms| {
                b.iter(|| classify_all(black_box(ms), 16, exec))
            });
        }
    }
    g.finish();
}

// the stable classifier runs a lattice search on obstruction cases, so per-item
// cost is uneven
fn stable(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify_stable");
    g.sample_size(10);
    let ms = corpus(256);
    let budget = StableBudget { coefficient_bound: 4, block_entry_bound: 8 };
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        g.bench_function(name, |b| b.iter(|| map_ordered(black_box(&ms), exec, |m| classify_stable(m, budget))));
    }
    g.finish();
}

criterion_group!(benches, classify, stable);
criterion_main!(benches);
