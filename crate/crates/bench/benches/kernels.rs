use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topobound_core::entropy::{entropy_of, med_bound};
use topobound_core::geometry::build_med_sequence;
use topobound_core::models::{haah_cubic_code, toric_code};
use topobound_core::{BitMatrix, MedWidths, Region};

fn random_matrix(rows: usize, cols: usize, seed: u64) -> BitMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = BitMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, rng.random_bool(0.5));
        }
    }
    m
}

fn rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    for n in [128usize, 512, 2048] {
        let m = random_matrix(n, n, n as u64);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| m.rank())
        });
    }
    group.finish();
}

fn cubic_degeneracy(c: &mut Criterion) {
    let mut group = c.benchmark_group("cubic_k");
    group.sample_size(10);
    for l in [4usize, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(l), &l, |b, &l| {
            b.iter(|| haah_cubic_code(l).unwrap().0.code_parameters().k)
        });
    }
    group.finish();
}

fn entropy(c: &mut Criterion) {
    let (g, lat) = toric_code(16).unwrap();
    let region = Region::parse(&lat, "star 0 0 7 7").unwrap();
    c.bench_function("toric16_star_block_entropy", |b| {
        b.iter(|| entropy_of(&g, &region))
    });
    let (g, lat) = toric_code(8).unwrap();
    let seq = build_med_sequence(&lat, 3, &MedWidths::default_for(&lat)).unwrap();
    c.bench_function("toric8_med_bound", |b| b.iter(|| med_bound(&g, &seq)));
}

criterion_group!(benches, rank, cubic_degeneracy, entropy);
criterion_main!(benches);
