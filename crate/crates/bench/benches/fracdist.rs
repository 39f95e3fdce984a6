use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fraccut::{data, fractional_distance, greedy_improve, BitVector, GreedyConfig, LpDecoder, Method};

fn sweeps(c: &mut Criterion) {
    let hamming = data::hamming();
    let golay = data::golay();
    c.bench_function("fracdist hamming full", |b| {
        b.iter(|| fractional_distance(black_box(&hamming), Method::Full).unwrap())
    });
    c.bench_function("fracdist hamming cone", |b| {
        b.iter(|| fractional_distance(black_box(&hamming), Method::Relaxed).unwrap())
    });
    let mut group = c.benchmark_group("golay");
    group.sample_size(10);
    group.bench_function("fracdist cone", |b| {
        b.iter(|| fractional_distance(black_box(&golay), Method::Relaxed).unwrap())
    });
    group.finish();
}

fn greedy(c: &mut Criterion) {
    let hamming = data::hamming();
    let cfg = GreedyConfig::with_max_rows(7);
    c.bench_function("greedy hamming", |b| b.iter(|| greedy_improve(black_box(&hamming), &cfg).unwrap()));
}

fn decoding(c: &mut Criterion) {
    let golay = data::golay();
    let dec = LpDecoder::new(&golay);
    let received = BitVector::from_support(golay.n(), &[0, 5]);
    c.bench_function("decode golay double flip", |b| b.iter(|| dec.decode(black_box(&received)).unwrap()));
}

criterion_group!(benches, sweeps, greedy, decoding);
criterion_main!(benches);
