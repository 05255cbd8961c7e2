use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ltesim_bench::snapshot_workload;
use ltesim_core::{allocate_subframe, ExpRuleParams, ExpVariant, LogRuleParams, Policy};
use std::hint::black_box;

fn allocate(c: &mut Criterion) {
    let policies = [
        ("PF", Policy::Pf),
        ("EXP-W", Policy::Exp(ExpRuleParams::default())),
        (
            "EXP-Q",
            Policy::Exp(ExpRuleParams {
                variant: ExpVariant::QueueLength,
                ..ExpRuleParams::default()
            }),
        ),
        ("LOG", Policy::Log(LogRuleParams::default())),
        ("FLS", Policy::Fls),
    ];
    let mut group = c.benchmark_group("allocate_subframe");
    for n_ues in [10, 60] {
        let flows = snapshot_workload(n_ues, 7);
        for (name, policy) in policies {
            group.bench_with_input(BenchmarkId::new(name, n_ues), &flows, |b, flows| {
                b.iter(|| allocate_subframe(black_box(flows), policy, 50))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, allocate);
criterion_main!(benches);
