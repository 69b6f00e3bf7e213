use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use srgcert::criteria::{certify_linear, CertifyOptions};
use srgcert::lti::{ComplexMatrix, Constant, FrequencyGrid, Spacing};
use srgcert::srg::{default_tau_grid, region_distance, srg_of_matrix_with, tau_swept_region, SrgOptions};

/// Deterministic non-normal test matrix.
fn sample(n: usize, shift: f64) -> ComplexMatrix {
    let rows: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let k = (i * n + j) as f64;
                    let d = if i == j { shift } else { 0.0 };
                    Complex64::new((1.3 * k).sin() + d, (0.7 * k + 0.4).cos())
                })
                .collect()
        })
        .collect();
    let refs: Vec<&[Complex64]> = rows.iter().map(Vec::as_slice).collect();
    ComplexMatrix::from_rows(&refs)
}

fn srg_compute(c: &mut Criterion) {
    let opts = SrgOptions::default();
    for n in [2, 4, 8] {
        let a = sample(n, 0.5);
        c.bench_function(&format!("srg_of_matrix {n}x{n}"), |b| {
            b.iter(|| srg_of_matrix_with(black_box(&a), &opts).unwrap())
        });
    }
}

fn separation(c: &mut Criterion) {
    let opts = SrgOptions::default();
    let conv = srg_of_matrix_with(&sample(2, 0.5), &opts).unwrap();
    let grid = srg_of_matrix_with(&sample(2, 6.0), &opts).unwrap();
    let tau = default_tau_grid(64);
    c.bench_function("tau_swept_region", |b| {
        b.iter(|| tau_swept_region(black_box(&conv), &tau, true).unwrap())
    });
    let swept = tau_swept_region(&conv, &tau, true).unwrap();
    c.bench_function("region_distance", |b| b.iter(|| region_distance(black_box(&grid), &swept)));
}

fn certify(c: &mut Criterion) {
    let yc = Constant(sample(2, 0.5));
    let yg = Constant(sample(2, 6.0));
    let freq = FrequencyGrid::from_hz(0.1, 1000.0, 20, Spacing::Log).unwrap();
    let opts = CertifyOptions::default();
    let mut g = c.benchmark_group("certify");
    g.sample_size(10);
    g.bench_function("linear 2x2, 20 points", |b| {
        b.iter(|| certify_linear(&yc, &yg, black_box(&freq), &opts).unwrap())
    });
    g.finish();
}

criterion_group!(benches, srg_compute, separation, certify);
criterion_main!(benches);
