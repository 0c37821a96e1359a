use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use num_complex::Complex64;

use liouville_core::sieve::liouville_segment_par;
use liouville_core::witness::{scan_with, ScanConfig};
use liouville_core::{liouville_segment, PrimeModulus, SmoothWindow};

fn sieve(c: &mut Criterion) {
    let mut group = c.benchmark_group("liouville_segment");
    for &(lo, len) in &[(1u64, 1u64 << 20), (1_000_000_000_000, 1 << 20)] {
        group.throughput(Throughput::Elements(len));
        group.bench_with_input(BenchmarkId::new("serial", lo), &(lo, len), |b, &(lo, len)| {
            b.iter(|| liouville_segment(black_box(lo), lo + len).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("parallel", lo), &(lo, len), |b, &(lo, len)| {
            b.iter(|| liouville_segment_par(black_box(lo), lo + len, 1 << 26).unwrap())
        });
    }
    group.finish();
}

fn characters(c: &mut Criterion) {
    let mut group = c.benchmark_group("characters");
    for &q in &[101u64, 10_007, 1_000_003] {
        let m = PrimeModulus::new(q).unwrap();
        let coeffs: Vec<Complex64> = (1..q).map(|n| Complex64::new((n % 7) as f64 - 3.0, 0.0)).collect();
        group.bench_with_input(BenchmarkId::new("twisted_sums", q), &q, |b, _| {
            b.iter(|| m.twisted_sums(1, black_box(&coeffs)))
        });
        group.bench_with_input(BenchmarkId::new("gauss_sums", q), &q, |b, _| b.iter(|| m.gauss_sums()));
    }
    group.finish();
}

fn window(c: &mut Criterion) {
    let w = SmoothWindow::default();
    let mut group = c.benchmark_group("window_fourier");
    for &t in &[0.5f64, 50.0, 2_000.0] {
        group.bench_with_input(BenchmarkId::new("adaptive", t), &t, |b, &t| b.iter(|| w.fourier(black_box(t)).unwrap()));
    }
    group.finish();
}

fn scan(c: &mut Criterion) {
    let config = ScanConfig::default();
    let mut group = c.benchmark_group("scan");
    group.sample_size(20);
    for &q in &[101u64, 997, 10_007] {
        let m = PrimeModulus::new(q).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(q), &q, |b, _| b.iter(|| scan_with(&m, 0.0, &config).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, sieve, characters, window, scan);
criterion_main!(benches);
