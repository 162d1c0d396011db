use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fbe_core::fbe::Function;
use fbe_core::synth::SynthConfig;
use fbe_core::verify::{equivalence_sweep, Execution};

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("equivalence_sweep");
    group.sample_size(10);
    let configs: Vec<SynthConfig> = [Function::Log2, Function::Arccot, Function::Cos]
        .into_iter()
        .map(|f| SynthConfig::new(f, 6, 10))
        .collect();
    for execution in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{execution:?}")),
            &execution,
            |b, &e| b.iter(|| equivalence_sweep(&configs, |sc| sc.valid_inputs(), e).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
