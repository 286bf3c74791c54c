//! Sampled batteries on a single-thread rayon pool against the default pool.
//!
//! Build with `--no-default-features` to measure the sequential fallback instead;
//! both pools then run the same sequential loop.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPoolBuilder;
use symspace::hyperbolic::verify_commutator_identity;
use symspace::numeric::{int, ratio, TolerancePolicy};
use symspace::reflection::{check_axioms, SpdModel};

fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let single = ThreadPoolBuilder::new().num_threads(1).build().expect("pool");
    let default = ThreadPoolBuilder::new().build().expect("pool");
    let label = format!("default-{}", default.current_num_threads());
    vec![("single".to_string(), single), (label, default)]
}

fn axiom_battery(c: &mut Criterion) {
    let policy = TolerancePolicy::default();
    let mut group = c.benchmark_group("axiom-battery");
    group.sample_size(10);
    for n in [2, 3] {
        let model = SpdModel::real(n, policy.precision_bits());
        for (label, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(format!("sl{n}"), &label), &n, |b, _| {
                b.iter(|| pool.install(|| black_box(check_axioms(&model, 7, 200, &policy))))
            });
        }
    }
    group.finish();
}

fn commutator_sweep(c: &mut Criterion) {
    let policy = TolerancePolicy::default();
    let ts = [ratio(1, 2), int(1), int(2), int(4)];
    let mut group = c.benchmark_group("commutator-sweep");
    group.sample_size(10);
    for (label, pool) in pools() {
        group.bench_function(&label, |b| {
            b.iter(|| {
                pool.install(|| {
                    for t in &ts {
                        black_box(verify_commutator_identity(t, 7, 50, &policy).expect("positive t"));
                    }
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, axiom_battery, commutator_sweep);
criterion_main!(benches);
