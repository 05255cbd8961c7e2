use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use ltesim_bench::scenario;
use ltesim_core::{run_with_trace, SchedulerKind};

/// One simulated second per iteration.
fn run_one_second(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_1s");
    group.sample_size(10);
    group.throughput(Throughput::Elements(1000));
    for scheduler in [SchedulerKind::Fls, SchedulerKind::Exp, SchedulerKind::Log] {
        for n_ues in [10, 60] {
            let config = scenario(scheduler, n_ues, 1.0);
            let trace = Arc::new(config.video.load().expect("synthetic trace"));
            group.bench_with_input(BenchmarkId::new(scheduler.name(), n_ues), &config, |b, config| {
                b.iter(|| run_with_trace(config, Arc::clone(&trace)).expect("run"))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, run_one_second);
criterion_main!(benches);
