use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use isotropy_core::isotropy::sample_isotropy_element;
use isotropy_core::orbit::enumerate_checks;
use isotropy_core::random::{random_isotropy_params, rng_from_seed, ParamOptions};
use isotropy_core::{ExactScalar, Execution, SegreStructure};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbit_enumeration");
    group.sample_size(10);
    let lambdas = [ExactScalar::zero(), ExactScalar::one()];
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 6), &exec, |b, &exec| {
            b.iter(|| enumerate_checks(6, &lambdas, exec).unwrap())
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("isotropy_sampling");
    group.sample_size(10);
    let st = SegreStructure::new(ExactScalar::i(), [(4, 1), (2, 2), (1, 2)]).unwrap();
    let mut rng = rng_from_seed(1);
    let params: Vec<_> = (0..32)
        .map(|_| random_isotropy_params(&mut rng, &st, ParamOptions::default()))
        .collect();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, params.len()), &exec, |b, &exec| {
            b.iter(|| exec.map(params.clone(), |p| sample_isotropy_element(&st, &p).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, sampling);
criterion_main!(benches);
