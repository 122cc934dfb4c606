//! End-to-end solver benchmarks on generated instances.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use circuitlp::gen::{gen_netflow, gen_random};
use circuitlp::{solve, DriverConfig};

fn bench_netflow(c: &mut Criterion) {
    let (inst, _) = gen_netflow(6, 12, 7).expect("generator");
    let config = DriverConfig::new(1e-2);
    c.bench_function("solve netflow 6x12 delta 1e-2", |b| {
        b.iter_batched(
            || inst.clone(),
            |inst| solve(&inst, &config).expect("solve"),
            BatchSize::SmallInput,
        )
    });
}

fn bench_random(c: &mut Criterion) {
    let (inst, _) = gen_random(4, 10, 2, 11).expect("generator");
    let config = DriverConfig::new(1e-2);
    c.bench_function("solve random 4x10 delta 1e-2", |b| {
        b.iter_batched(
            || inst.clone(),
            |inst| solve(&inst, &config).expect("solve"),
            BatchSize::SmallInput,
        )
    });
}

fn bench_kappa_oracle(c: &mut Criterion) {
    let (inst, _) = gen_netflow(4, 8, 3).expect("generator");
    c.bench_function("kappa enumeration 4x8 incidence", |b| {
        b.iter(|| {
            let m = circuitlp::circuit_oracle::RatMat::from_sparse(inst.a());
            circuitlp::circuit_oracle::kappa(&m, circuitlp::circuit_oracle::MAX_ORACLE_COLUMNS)
                .expect("kappa")
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_netflow, bench_random, bench_kappa_oracle
}
criterion_main!(benches);
