use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nicepair_core::linalg::{
    coefficient_identity, condition_b, git_stable, random_omega, ProjectiveConfig, Rational,
    RationalMatrix,
};

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> RationalMatrix {
    let entries = (0..rows * cols)
        .map(|_| Rational::from_integer(BigInt::from(rng.random_range(-bound..=bound))))
        .collect();
    RationalMatrix::new(rows, cols, entries).unwrap()
}

fn bench_determinant(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = random_matrix(&mut rng, 8, 8, 99);
    c.bench_function("determinant_8x8", |b| {
        b.iter(|| black_box(m.determinant().unwrap()))
    });
}

fn bench_condition_b(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let phi = random_matrix(&mut rng, 8, 4, 9);
    c.bench_function("condition_b_8x4", |b| {
        b.iter(|| black_box(condition_b(&phi).unwrap()))
    });
}

fn bench_coefficient_identity(c: &mut Criterion) {
    let omega = random_omega(3, 2, 11).unwrap();
    c.bench_function("coefficient_identity_g3_n2", |b| {
        b.iter(|| black_box(coefficient_identity(&omega)))
    });
}

fn bench_stability(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let points = (0..8)
        .map(|_| loop {
            let p: Vec<Rational> = (0..4)
                .map(|_| Rational::from_integer(BigInt::from(rng.random_range(-3i64..=3))))
                .collect();
            if p.iter()
                .any(|x| *x != Rational::from_integer(BigInt::from(0)))
            {
                return p;
            }
        })
        .collect();
    let config = ProjectiveConfig::new(3, points).unwrap();
    c.bench_function("git_stable_p3_8pts", |b| {
        b.iter(|| black_box(git_stable(&config)))
    });
}

criterion_group!(
    benches,
    bench_determinant,
    bench_condition_b,
    bench_coefficient_identity,
    bench_stability
);
criterion_main!(benches);
