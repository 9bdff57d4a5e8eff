//! Sequential against data-parallel execution on the hot paths.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ncseries::ideal::{commutator_generators, CompletedIdealBasis};
use ncseries::recenter::{recenter_with, Germ, LocalFunctionFamily, Point, Section};
use ncseries::words::words_up_to;
use ncseries::{Exec, NCMorphism, NCSeries, Rational, Scalar};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

/// Deterministic dense series: every word up to `d` with a small coefficient.
fn dense(n: usize, d: usize, salt: i64) -> NCSeries {
    let terms = words_up_to(n, d)
        .enumerate()
        .map(|(k, w)| (w, Scalar::ratio((k as i64 * 7 + salt) % 11 - 5, (k as i64 + salt) % 3 + 1)));
    NCSeries::from_terms(n, d, terms).unwrap()
}

fn mul(c: &mut Criterion) {
    let (f, g) = (dense(3, 6, 1), dense(3, 6, 2));
    let mut group = c.benchmark_group("mul n=3 D=6");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(f.mul_with(&g, exec).unwrap()))
        });
    }
    group.finish();
}

fn recenter(c: &mut Criterion) {
    let germ = Germ::new(Point::origin(2), dense(2, 7, 3)).unwrap();
    let q = Point(vec![Scalar::ratio(1, 2), Scalar::ratio(-2, 3)]);
    let mut group = c.benchmark_group("recenter n=2 D=7");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(recenter_with(&germ, &q, 7, exec).unwrap()))
        });
    }
    group.finish();
}

fn invert(c: &mut Criterion) {
    let d = 5;
    let images = vec![
        &NCSeries::variable(2, d, 1).unwrap() + &dense(2, d, 4).truncate(d).component(2),
        &NCSeries::variable(2, d, 2).unwrap() + &dense(2, d, 5).component(3),
    ];
    let phi = NCMorphism::new(2, 2, d, images).unwrap();
    let mut group = c.benchmark_group("invert n=2 D=5");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(phi.invert_with(d, exec).unwrap()))
        });
    }
    group.finish();
}

fn ideal_basis(c: &mut Criterion) {
    let gens = commutator_generators(3, 4);
    let mut group = c.benchmark_group("commutator ideal n=3 D=4");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(CompletedIdealBasis::build_with(&gens, 3, 4, exec).unwrap()))
        });
    }
    group.finish();
}

fn family_check(c: &mut Criterion) {
    let d = 5;
    let base = Germ::new(Point::origin(2), dense(2, d, 6)).unwrap();
    let radii = vec![Rational::from_integer(100.into()); 2];
    let members = (0..8)
        .map(|k| {
            let q = Point(vec![Scalar::ratio(k, 3), Scalar::ratio(1 - k, 2)]);
            Section::new(recenter_with(&base, &q, d, Exec::Sequential).unwrap(), radii.clone()).unwrap()
        })
        .collect();
    let family = LocalFunctionFamily::new(members);
    let mut group = c.benchmark_group("family check 8 germs D=5");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(family.check_with(d, exec).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, mul, recenter, invert, ideal_basis, family_check);
criterion_main!(benches);
