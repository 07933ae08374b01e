use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use posreal::cone::sample_cone;
use posreal::fixtures;
use posreal::gpset::{construct, GpClass};
use posreal::linalg::{hermitian_eig, spectrum, ComplexMatrix};
use posreal::prl::{
    boundary_oracle, find_certificate, solve_are, AreBranch, NuTarget, SearchOptions, ORACLE_TOL,
};
use posreal::rng::DetRng;

fn random_hermitian(n: usize, rng: &mut DetRng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| {
        posreal::Complex64::new(rng.normal(), rng.normal())
    });
    g.hermitian_part()
}

fn bench_hermitian_eig(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eig");
    for &n in &[4usize, 8, 16] {
        let mut rng = DetRng::new(n as u64);
        let m = random_hermitian(n, &mut rng);
        group.bench_function(format!("{n}x{n}"), |b| {
            b.iter_batched(
                || m.clone(),
                |m| hermitian_eig(&m, 1e-9).unwrap(),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn bench_spectrum(c: &mut Criterion) {
    let mut rng = DetRng::new(99);
    let m = ComplexMatrix::from_fn(12, 12, |_, _| {
        posreal::Complex64::new(rng.normal(), rng.normal())
    });
    c.bench_function("spectrum_12x12", |b| {
        b.iter_batched(
            || m.clone(),
            |m| spectrum(&m).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_certify_fixture(c: &mut Criterion) {
    let re = fixtures::alpha().partition();
    c.bench_function("find_certificate_alpha", |b| {
        b.iter(|| find_certificate(&re, NuTarget::Any, &SearchOptions::default()).unwrap())
    });
}

fn bench_construct(c: &mut Criterion) {
    let cls = GpClass::new(3, 1, 1).unwrap();
    c.bench_function("construct_3_1_1", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed = seed.wrapping_add(1);
            construct(cls, seed).unwrap()
        })
    });
}

fn bench_sample_cone(c: &mut Criterion) {
    let h = ComplexMatrix::real_diag(&[-4.0, 9.0, 1.0, 2.0]);
    c.bench_function("sample_cone_4x4", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed = seed.wrapping_add(1);
            sample_cone(&h, seed).unwrap()
        })
    });
}

fn bench_boundary_oracle(c: &mut Criterion) {
    let re = fixtures::eta().partition();
    c.bench_function("boundary_oracle_eta", |b| {
        b.iter(|| boundary_oracle(&re, 201, ORACLE_TOL).unwrap())
    });
}

fn bench_solve_are(c: &mut Criterion) {
    let re = posreal::Realization::new(
        ComplexMatrix::from_real(&[&[-2.0, 1.0, 0.0], &[0.0, -1.0, 0.5], &[0.25, 0.0, -3.0]]),
        ComplexMatrix::from_real(&[&[1.0], &[0.5], &[0.0]]),
        ComplexMatrix::from_real(&[&[1.0, 0.0, 0.5]]),
        ComplexMatrix::identity(1),
    )
    .unwrap();
    c.bench_function("solve_are_3x3", |b| {
        b.iter(|| solve_are(&re, AreBranch::Stabilizing).unwrap())
    });
}

criterion_group!(
    benches,
    bench_hermitian_eig,
    bench_spectrum,
    bench_certify_fixture,
    bench_construct,
    bench_sample_cone,
    bench_boundary_oracle,
    bench_solve_are
);
criterion_main!(benches);
