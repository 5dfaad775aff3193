//! Batch-scenario throughput: rayon fan-out vs the sequential fallback.
//!
//! The workload is an epsilon sweep of short observer runs, the same shape
//! `obslab sweep` executes. Build with `--no-default-features` to measure
//! the build where the parallel path compiles down to the sequential one.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use obslab::cli::config::ScenarioConfig;
use obslab::estimators::EstimatorGains;
use obslab::simkit::{run_scenarios_parallel, run_scenarios_sequential, Scenario};

fn sweep_scenarios(count: usize) -> Vec<Scenario> {
    let base = ScenarioConfig::from_toml(
        "[controller]\nkind = \"observer\"\n\n[sim]\nt_end = 1.0\nstep = 0.0002\n",
    )
    .unwrap()
    .resolve()
    .unwrap();
    (0..count)
        .map(|k| {
            let eps = 0.05 - 0.002 * k as f64;
            let mut s = base.clone();
            s.estimator = Some(EstimatorGains::new(eps, vec![10.0, 10.0, 10.0]).unwrap());
            s
        })
        .collect()
}

fn bench_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("epsilon_sweep");
    for count in [4usize, 16] {
        let scenarios = sweep_scenarios(count);
        group.bench_with_input(BenchmarkId::new("sequential", count), &scenarios, |b, s| {
            b.iter(|| {
                let results = run_scenarios_sequential(s);
                assert!(results.iter().all(Result::is_ok));
            })
        });
        group.bench_with_input(BenchmarkId::new("parallel", count), &scenarios, |b, s| {
            b.iter(|| {
                let results = run_scenarios_parallel(s, None);
                assert!(results.iter().all(Result::is_ok));
            })
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_sweep
}
criterion_main!(benches);
