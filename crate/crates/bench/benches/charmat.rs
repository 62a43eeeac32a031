use std::hint::black_box;

use charmat_core::boundary::{
    laplacian, separation_witness, BoundaryCondition, GridDiscretization,
};
use charmat_core::family::{char_matrix_fiberwise, decomposition_suite, Polynomial};
use charmat_core::graph::{char_matrix, char_matrix_oracle, verify_identities};
use charmat_core::hilbert::eigvals_hermitian;
use charmat_core::random;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn graph_projection(c: &mut Criterion) {
    let mut group = c.benchmark_group("char_matrix");
    for n in [4, 16, 64] {
        let t = random::complex_matrix(&mut random::rng(n as u64), n, n);
        group.bench_with_input(BenchmarkId::new("closed_form", n), &t, |b, t| {
            b.iter(|| char_matrix(black_box(t)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("gram_schmidt", n), &t, |b, t| {
            b.iter(|| char_matrix_oracle(black_box(t)).unwrap())
        });
        let p = char_matrix(&t).unwrap();
        group.bench_with_input(BenchmarkId::new("identities", n), &(t, p), |b, (t, p)| {
            b.iter(|| verify_identities(black_box(t), black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn families(c: &mut Criterion) {
    let mut rng = random::rng(7);
    let fam = random::family(&mut rng, 5, 6, random::hermitian);
    let p = Polynomial::from_real(&[0.0, -2.0, 0.0, 1.0]);
    c.bench_function("family/fiberwise_char_matrix", |b| {
        b.iter(|| char_matrix_fiberwise(black_box(&fam)).unwrap())
    });
    c.bench_function("family/decomposition_suite", |b| {
        b.iter(|| decomposition_suite(black_box(&fam), &p, None).unwrap())
    });
}

fn boundary(c: &mut Criterion) {
    let mut group = c.benchmark_group("boundary");
    group.sample_size(10);
    for n in [200, 800] {
        let g = GridDiscretization::interior(n).unwrap();
        let l = laplacian(&g, BoundaryCondition::Dirichlet).unwrap();
        group.bench_with_input(BenchmarkId::new("dirichlet_eigenvalues", n), &l, |b, l| {
            b.iter(|| eigvals_hermitian(black_box(l)).unwrap())
        });
    }
    group.bench_function("separation_witness/10000", |b| {
        b.iter(|| separation_witness(black_box(10_000)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, graph_projection, families, boundary);
criterion_main!(benches);
