use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use qblue_bench::{dc_histogram, sine_record, ten_bit};
use qblue_core::estimators::{
    estimate_dc_known_sigma, estimate_dc_unknown_sigma, estimate_sine, fold_coherent, lse_sinefit,
};
use qblue_core::montecarlo::{linear_grid, run_sweep, ModelKind, SweepConfig};
use qblue_core::DcModelKnownSigma;

fn dc(c: &mut Criterion) {
    let q = ten_bit();
    let narrow = dc_histogram(&q, 0.2, 500, 1);
    let wide = dc_histogram(&q, 2.0, 5000, 2);
    let model = DcModelKnownSigma::new(0.2 * q.step()).unwrap();
    let wide_model = DcModelKnownSigma::new(2.0 * q.step()).unwrap();
    c.bench_function("dc1 sigma=0.2 N=500", |b| {
        b.iter(|| estimate_dc_known_sigma(black_box(&narrow), &q, &model).unwrap())
    });
    c.bench_function("dc1 sigma=2 N=5000", |b| {
        b.iter(|| estimate_dc_known_sigma(black_box(&wide), &q, &wide_model).unwrap())
    });
    c.bench_function("dc2 sigma=2 N=5000", |b| {
        b.iter(|| estimate_dc_unknown_sigma(black_box(&wide), &q).unwrap())
    });
}

fn sine(c: &mut Criterion) {
    let q = ten_bit();
    let (design, codes) = sine_record(&q, 3);
    c.bench_function("sine3 M=20 periods=50", |b| {
        b.iter(|| {
            let folded = fold_coherent(black_box(&codes), 20, 50, q.levels()).unwrap();
            estimate_sine(&folded, &design, &q).unwrap()
        })
    });
    c.bench_function("lse M=20 periods=50", |b| {
        b.iter(|| lse_sinefit(black_box(&codes), &q, &design).unwrap())
    });
}

fn sweep(c: &mut Criterion) {
    let mut config = SweepConfig::dc(
        ModelKind::Dc1,
        0.2,
        linear_grid(-0.45, 0.45, 0.15).unwrap(),
        vec![500],
    );
    config.records = 200;
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("dc1 7 points x 200 records", |b| {
        b.iter(|| run_sweep(&config).unwrap())
    });
    group.finish();
}

criterion_group!(benches, dc, sine, sweep);
criterion_main!(benches);
