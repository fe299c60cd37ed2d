use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use holodd::exec::Execution;
use holodd::harness::config::RunConfig;
use holodd::harness::sweep::run_dd_sweep;

fn sweep_config() -> holodd::harness::ResolvedConfig {
    let mut cfg = RunConfig { cycles: Some(4), ensemble_size: Some(8), steps_per_interval: Some(50), ..Default::default() };
    cfg.sweep.tau_grid = vec![0.05, 0.03, 0.02, 0.01];
    cfg.sweep.replicates = Some(2);
    cfg.resolve().expect("valid config")
}

fn bench_sweep(c: &mut Criterion) {
    let cfg = sweep_config();
    let mut group = c.benchmark_group("dd_sweep");
    group.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_dd_sweep(&cfg, exec).expect("sweep runs"))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sweep);
criterion_main!(benches);
