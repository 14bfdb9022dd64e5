use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fuglede_bench::fixtures;
use fuglede_core::verifier::{verify_conjecture, OrbitPolicy, VerifyOptions};
use fuglede_core::{find_complement, find_spectrum, zero_set, Group};

fn searches(c: &mut Criterion) {
    for (p, q) in [(2, 3), (3, 2), (5, 2), (7, 3)] {
        let g = Group::from_primes(p, q).unwrap();
        for (name, s) in fixtures(&g) {
            let id = format!("{p}x{q}/{name}");
            c.bench_with_input(BenchmarkId::new("zero_set", &id), &s, |b, s| {
                b.iter(|| zero_set(&g, black_box(s)))
            });
            c.bench_with_input(BenchmarkId::new("find_spectrum", &id), &s, |b, s| {
                b.iter(|| find_spectrum(&g, black_box(s)))
            });
            c.bench_with_input(BenchmarkId::new("find_complement", &id), &s, |b, s| {
                b.iter(|| find_complement(&g, black_box(s)))
            });
        }
    }
}

fn scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    let g = Group::from_primes(2, 3).unwrap();
    for (name, policy) in [
        ("direct", OrbitPolicy::Never),
        ("orbits", OrbitPolicy::Always),
    ] {
        let options = VerifyOptions::exhaustive().with_orbits(policy);
        group.bench_function(format!("2x3/{name}"), |b| {
            b.iter(|| verify_conjecture(&g, &options).unwrap())
        });
    }
    let g = Group::from_primes(5, 2).unwrap();
    let options = VerifyOptions::sampled(1, 1000);
    group.bench_function("5x2/sampled-1000", |b| {
        b.iter(|| verify_conjecture(&g, &options).unwrap())
    });
    group.finish();
}

criterion_group!(benches, searches, scans);
criterion_main!(benches);
