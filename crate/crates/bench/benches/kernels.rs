use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use hermgrass_core::analysis::{dual_min_distance, min_distance_subfield_default};
use hermgrass_core::codebuild::generator_hermitian;
use hermgrass_core::{CodeFamily, FieldTower, GeneratorMatrix};

fn field_mul(c: &mut Criterion) {
    let f = FieldTower::for_q(9).unwrap();
    let elems: Vec<_> = f.elements().collect();
    c.bench_function("mul all pairs F_81", |b| {
        b.iter(|| {
            let mut acc = hermgrass_core::FieldElement::ZERO;
            for &x in &elems {
                for &y in &elems {
                    acc = f.add(acc, f.mul(x, y));
                }
            }
            black_box(acc)
        })
    });
}

fn generator(c: &mut Criterion) {
    let t = Arc::new(FieldTower::for_q(3).unwrap());
    c.bench_function("build C^H(3) q=3", |b| {
        b.iter(|| GeneratorMatrix::build(t.clone(), CodeFamily::Hermitian, black_box(3)).unwrap())
    });
}

fn distances(c: &mut Criterion) {
    let mut group = c.benchmark_group("distance");
    group.sample_size(10);
    let g32 = generator_hermitian(3, 2).unwrap();
    group.bench_function("subfield minimum C^H(3) q=2", |b| {
        b.iter(|| min_distance_subfield_default(&g32, u128::MAX).unwrap().d)
    });
    let g25 = generator_hermitian(2, 5).unwrap();
    group.bench_function("dual C^H(2) q=5", |b| {
        b.iter(|| dual_min_distance(&g25, 4, u128::MAX).unwrap().d_dual)
    });
    group.finish();
}

criterion_group!(benches, field_mul, generator, distances);
criterion_main!(benches);
