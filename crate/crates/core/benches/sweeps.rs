use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hitchin::connection::{verify_braid_relations, verify_heisenberg_invariance, ConnectionForm, LambdaPreset};
use hitchin::holonomy::{braid_base, transport, IntegratorConfig, NumericForm, PathSpec};
use hitchin::par;
use hitchin::spin::{Half, SpinRep};

fn pools() -> Vec<(&'static str, usize)> {
    let full = std::thread::available_parallelism().map_or(1, |n| n.get());
    vec![("1-thread", 1), ("full-pool", full)]
}

fn braid(c: &mut Criterion) {
    let form = ConnectionForm::with_preset(2, 4, LambdaPreset::Hitchin).unwrap();
    let mut group = c.benchmark_group("braid_relations_g2_k4");
    group.sample_size(10);
    for (name, threads) in pools() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &threads, |b, &t| {
            b.iter(|| par::with_threads(t, || black_box(verify_braid_relations(&form))))
        });
    }
    group.finish();
}

fn invariance(c: &mut Criterion) {
    let rep = SpinRep::new(2, Half::Plus).unwrap();
    let form = ConnectionForm::new(&rep, 3, LambdaPreset::Hitchin.value(3)).unwrap();
    let mut group = c.benchmark_group("heisenberg_invariance_g2_k3");
    group.sample_size(10);
    for (name, threads) in pools() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &threads, |b, &t| {
            b.iter(|| par::with_threads(t, || black_box(verify_heisenberg_invariance(&rep, &form).unwrap())))
        });
    }
    group.finish();
}

fn connection_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("connection_form_g2_k5");
    group.sample_size(10);
    for (name, threads) in pools() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &threads, |b, &t| {
            b.iter(|| par::with_threads(t, || black_box(ConnectionForm::with_preset(2, 5, LambdaPreset::Hitchin).unwrap())))
        });
    }
    group.finish();
}

fn holonomy(c: &mut Criterion) {
    let form = NumericForm::from_form(&ConnectionForm::with_preset(2, 4, LambdaPreset::Hitchin).unwrap());
    let path = PathSpec::pure_braid_loop(&braid_base(), 1, 2, None).unwrap();
    let cfg = IntegratorConfig::new(512).unwrap();
    let mut group = c.benchmark_group("transport_k4_512_steps");
    group.sample_size(10);
    for (name, threads) in pools() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &threads, |b, &t| {
            b.iter(|| par::with_threads(t, || black_box(transport(&path, &form, &cfg).unwrap())))
        });
    }
    group.finish();
}

criterion_group!(benches, braid, invariance, connection_build, holonomy);
criterion_main!(benches);
