use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;

use nicepair_core::classification::Classifier;
use nicepair_core::pair::{Genus, Pair};

fn genus(g: i64) -> Genus {
    Genus::new(g).unwrap()
}

fn bench_nice_witness(c: &mut Criterion) {
    c.bench_function("nice_witness_g6_60_307", |b| {
        b.iter(|| {
            let cls = Classifier::new(genus(6));
            black_box(cls.is_nice(&Pair::new(60, 307).unwrap()))
        })
    });
}

fn bench_fine_search(c: &mut Criterion) {
    c.bench_function("fine_search_g6_67_342_cold", |b| {
        b.iter(|| {
            let cls = Classifier::new(genus(6));
            black_box(cls.is_fine(&Pair::new(67, 342).unwrap()).unwrap())
        })
    });
    c.bench_function("fine_search_g6_67_342_warm", |b| {
        let cls = Classifier::new(genus(6));
        cls.is_fine(&Pair::new(67, 342).unwrap()).unwrap();
        b.iter(|| black_box(cls.is_fine(&Pair::new(67, 342).unwrap()).unwrap()))
    });
}

fn bench_enumerate(c: &mut Criterion) {
    c.bench_function("enumerate_g6_n20", |b| {
        b.iter(|| {
            let cls = Classifier::new(genus(6));
            black_box(cls.enumerate(&BigInt::from(20)).count())
        })
    });
}

criterion_group!(
    benches,
    bench_nice_witness,
    bench_fine_search,
    bench_enumerate
);
criterion_main!(benches);
