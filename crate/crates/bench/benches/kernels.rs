use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use chebpot::{
    bergman_spectrum, energy_chart, gram_exact, mu_vector, PosDefHermitian, QuadratureScheme, QuadratureSpec,
};

// Tridiagonal real SPD matrix of the given order.
fn tridiagonal(order: usize) -> PosDefHermitian {
    let rows: Vec<Vec<f64>> = (0..order)
        .map(|i| {
            (0..order)
                .map(|j| match i.abs_diff(j) {
                    0 => 3.0 + i as f64 * 0.1,
                    1 => 0.7,
                    _ => 0.0,
                })
                .collect()
        })
        .collect();
    let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    PosDefHermitian::from_real_rows(&refs).unwrap()
}

fn mu(c: &mut Criterion) {
    let mut g = c.benchmark_group("mu_vector");
    for order in [2, 4, 8, 16] {
        let p = tridiagonal(order);
        g.bench_with_input(BenchmarkId::from_parameter(order), &p, |b, p| b.iter(|| mu_vector(black_box(p))));
    }
    g.finish();
}

fn gram(c: &mut Criterion) {
    let mut g = c.benchmark_group("gram_exact");
    let p = tridiagonal(3);
    for m in [2, 4, 8] {
        g.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| b.iter(|| gram_exact(black_box(&p), m).unwrap()));
    }
    g.finish();
}

fn bergman(c: &mut Criterion) {
    let mut g = c.benchmark_group("bergman_spectrum");
    let p0 = tridiagonal(3);
    let p1 = PosDefHermitian::from_real_diagonal(&[2.0, 1.0, 0.5]).unwrap();
    for m in [2, 4, 6] {
        g.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| bergman_spectrum(black_box(&p0), black_box(&p1), m).unwrap())
        });
    }
    g.finish();
}

fn energy(c: &mut Criterion) {
    let mut g = c.benchmark_group("energy_chart");
    g.sample_size(10);
    let p0 = PosDefHermitian::identity(2);
    let p1 = tridiagonal(2);
    for radial in [100, 200] {
        let spec = QuadratureSpec { scheme: QuadratureScheme::product(radial, 32), tol: None };
        g.bench_with_input(BenchmarkId::new("n1", radial), &spec, |b, spec| {
            b.iter(|| energy_chart(black_box(&p0), black_box(&p1), spec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(kernels, mu, gram, bergman, energy);
criterion_main!(kernels);
