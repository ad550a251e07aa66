//! Parallel vs sequential throughput of the quantization inner loops.
//!
//! Build with the default `parallel` feature to compare both paths:
//! `cargo bench -p crossbag`. Without the feature only the sequential
//! benchmarks run.

use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::Rng;

#[cfg(feature = "parallel")]
use crossbag::bagging::quantize_dataset_parallel;
use crossbag::bagging::{quantize_dataset_sequential, QuantizationConfig};
#[cfg(feature = "parallel")]
use crossbag::codebook::assign_nearest_parallel;
use crossbag::codebook::{
    assign_nearest_sequential, GenerationMethod, NumericCodebook, SubCodebook,
};
use crossbag::dataset::{Dataset, Frame};
use crossbag::rng::RngStream;

fn random_vectors(n: usize, dims: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = RngStream::new(seed).stream(0);
    (0..n)
        .map(|_| (0..dims).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect()
}

fn bench_nearest_assignment(c: &mut Criterion) {
    let mut group = c.benchmark_group("nearest_assignment");
    for &(points_n, centroids_n, dims) in &[(512usize, 64usize, 8usize), (4096, 256, 16)] {
        let points = random_vectors(points_n, dims, 1);
        let centroids = random_vectors(centroids_n, dims, 2);
        group.throughput(Throughput::Elements(points_n as u64));
        let label = format!("{points_n}x{centroids_n}x{dims}");

        group.bench_with_input(BenchmarkId::new("sequential", &label), &(), |b, _| {
            b.iter(|| black_box(assign_nearest_sequential(&points, &centroids)))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", &label), &(), |b, _| {
            b.iter(|| black_box(assign_nearest_parallel(&points, &centroids)))
        });
    }
    group.finish();
}

fn bench_frame_quantization(c: &mut Criterion) {
    let mut group = c.benchmark_group("frame_quantization");
    let dims = 13;
    let frames_n = 4096;
    let mut rng = RngStream::new(3).stream(0);
    let frames: Vec<Frame> = (0..frames_n)
        .map(|i| Frame {
            name: "bench".into(),
            time: Some(i as f64 * 0.01),
            label: None,
            numeric: BTreeMap::from([(
                1u8,
                (0..dims).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            )]),
            text: None,
        })
        .collect();
    let ds = Dataset::from_frames(frames).unwrap();
    let centroids = random_vectors(256, dims, 4);
    let codebooks = BTreeMap::from([(
        1u8,
        NumericCodebook::Flat(SubCodebook::new(1, centroids, GenerationMethod::Random).unwrap()),
    )]);
    let q = QuantizationConfig {
        num_assignments: 20,
        gaussian_sigma: Some(1.0),
    };
    group.throughput(Throughput::Elements(frames_n as u64));

    group.bench_function("sequential", |b| {
        b.iter(|| black_box(quantize_dataset_sequential(&ds, &codebooks, &q).unwrap()))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(quantize_dataset_parallel(&ds, &codebooks, &q).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_nearest_assignment, bench_frame_quantization);
criterion_main!(benches);
