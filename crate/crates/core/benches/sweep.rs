use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use volpoly::sweep::{sweep_realize, ExecMode};

fn realize_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep_realize");
    group.sample_size(10);
    for bound in [8u32, 14] {
        for mode in [ExecMode::Serial, ExecMode::Parallel] {
            group.bench_with_input(BenchmarkId::new(format!("{mode:?}"), bound), &bound, |b, &n| {
                b.iter(|| sweep_realize(n, mode))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, realize_sweep);
criterion_main!(benches);
