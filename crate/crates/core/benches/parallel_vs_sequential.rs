//! Sequential vs rayon paths for the two data-parallel hot spots: scoring a
//! generation of masks and counting DBSCAN neighborhoods.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ctxevo_core::dataset::{chronological_split, generate_synthetic, SynthSpec};
use ctxevo_core::ensemble::{neighbor_counts, neighbor_counts_sequential};
use ctxevo_core::evolve::{operators::random_genome, Evaluator};
use ctxevo_core::neuralscorer::{train_surrogate, ScorerConfig};
use ctxevo_core::{exec, seed, Genome};
use rand::Rng;

fn masks(n: usize, len: usize, rng: &mut seed::Rng) -> Vec<Genome> {
    (0..n)
        .map(|_| {
            let k = rng.random_range(1..len / 2);
            random_genome(len, k, rng)
        })
        .collect()
}

fn generation(c: &mut Criterion) {
    let spec = SynthSpec { n_records: 4_000, ..SynthSpec::default() };
    let s = generate_synthetic(&spec, 1).unwrap();
    let split = chronological_split(&s.dataset).unwrap();
    let cfg = ScorerConfig { epochs_full: 2, ..ScorerConfig::default() };
    let sur = train_surrogate(&s.dataset, &split, &cfg).unwrap();
    let ev = Evaluator::predict_only(&s.dataset, &split, &sur);
    let pop = masks(50, s.dataset.n_features(), &mut seed::rng(2));

    let mut g = c.benchmark_group("predict_only_generation");
    g.sample_size(10);
    g.bench_function("sequential", |b| b.iter(|| exec::map_sequential(&pop, |i, m| ev.estimate(m, 0, i).unwrap())));
    #[cfg(feature = "parallel")]
    g.bench_function("parallel", |b| b.iter(|| exec::map_parallel(&pop, |i, m| ev.estimate(m, 0, i).unwrap())));
    g.finish();
}

fn dbscan(c: &mut Criterion) {
    let mut g = c.benchmark_group("dbscan_neighbor_counts");
    g.sample_size(10);
    for n in [500, 2000] {
        let genomes = masks(n, 200, &mut seed::rng(3));
        g.bench_with_input(BenchmarkId::new("sequential", n), &genomes, |b, gs| {
            b.iter(|| neighbor_counts_sequential(gs, 0.3))
        });
        g.bench_with_input(BenchmarkId::new("default", n), &genomes, |b, gs| b.iter(|| neighbor_counts(gs, 0.3)));
    }
    g.finish();
}

criterion_group!(benches, generation, dbscan);
criterion_main!(benches);
