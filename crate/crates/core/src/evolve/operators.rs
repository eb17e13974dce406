//! Initialization, selection, crossover and mutation.

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{GAConfig, Individual};
use crate::error::{Error, Result};
use crate::genome::Genome;

/// Active-bit count for one initial genome: `round(k)`, `k ~ N(mu, sigma)`,
/// clamped to `[1, L]`.
pub fn clamp_active_count(draw: f64, len: usize) -> usize {
    let k = draw.round();
    if k < 1.0 {
        1
    } else if k > len as f64 {
        len
    } else {
        k as usize
    }
}

/// Genome with exactly `k` distinct uniformly chosen bits set.
pub fn random_genome(len: usize, k: usize, rng: &mut impl Rng) -> Genome {
    Genome::from_indices(len, sample(rng, len, k.min(len)))
}

pub fn init_population(cfg: &GAConfig, len: usize, rng: &mut impl Rng) -> Result<Vec<Genome>> {
    if len < 2 {
        return Err(Error::Invalid(format!("need at least 2 features, got {len}")));
    }
    let normal = Normal::new(cfg.init_mu_fraction * len as f64, cfg.init_sigma)
        .map_err(|e| Error::Config(format!("initial size distribution: {e}")))?;
    Ok((0..cfg.population_size)
        .map(|_| {
            let k = clamp_active_count(normal.sample(rng), len);
            random_genome(len, k, rng)
        })
        .collect())
}

/// k-tournament with replacement; the winner has the lowest fitness, ties
/// broken by smaller size, then by lower population index.
pub fn tournament_select(pop: &[Individual], k: usize, rng: &mut impl Rng) -> usize {
    assert!(!pop.is_empty(), "tournament on an empty population");
    let mut best = rng.random_range(0..pop.len());
    for _ in 1..k {
        let c = rng.random_range(0..pop.len());
        if beats(&pop[c], c, &pop[best], best) {
            best = c;
        }
    }
    best
}

fn beats(a: &Individual, ai: usize, b: &Individual, bi: usize) -> bool {
    a.fitness.total_cmp(&b.fitness).then(a.size.cmp(&b.size)).then(ai.cmp(&bi)).is_lt()
}

/// Exchanges the segments between consecutive cut points, starting with
/// the second segment. `cuts` are positions in `1..L`, ascending.
pub fn crossover_at(a: &Genome, b: &Genome, cuts: &[usize]) -> Result<(Genome, Genome)> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!("genome lengths {} and {} differ", a.len(), b.len())));
    }
    let (mut ca, mut cb) = (a.clone(), b.clone());
    let mut swap = false;
    let mut start = 0;
    for &end in cuts.iter().chain(std::iter::once(&a.len())) {
        if swap {
            for j in start..end {
                ca.set(j, b.get(j));
                cb.set(j, a.get(j));
            }
        }
        swap = !swap;
        start = end;
    }
    Ok((ca, cb))
}

/// `n` distinct sorted cut points drawn uniformly from `1..L`.
fn cut_points(len: usize, n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut cuts: Vec<usize> = sample(rng, len - 1, n).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    cuts
}

fn check_pair(a: &Genome, b: &Genome, min_len: usize) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!("genome lengths {} and {} differ", a.len(), b.len())));
    }
    if a.len() < min_len {
        return Err(Error::Invalid(format!("crossover needs length >= {min_len}, got {}", a.len())));
    }
    Ok(())
}

pub fn crossover_5point(a: &Genome, b: &Genome, rng: &mut impl Rng) -> Result<(Genome, Genome)> {
    check_pair(a, b, 6)?;
    let cuts = cut_points(a.len(), 5, rng);
    crossover_at(a, b, &cuts)
}

/// n-point crossover with `n` uniform in `1..=min(max_n, L - 1)`.
pub fn crossover_npoint(a: &Genome, b: &Genome, max_n: usize, rng: &mut impl Rng) -> Result<(Genome, Genome)> {
    check_pair(a, b, 2)?;
    let n = rng.random_range(1..=max_n.min(a.len() - 1).max(1));
    let cuts = cut_points(a.len(), n, rng);
    crossover_at(a, b, &cuts)
}

/// Flips each bit with probability `p`; an all-zero result gets one random
/// bit set.
pub fn mutate(g: &Genome, p: f64, rng: &mut impl Rng) -> Genome {
    let mut out = g.clone();
    if p > 0.0 {
        for j in 0..out.len() {
            if rng.random_bool(p) {
                out.flip(j);
            }
        }
    }
    repair(&mut out, rng);
    out
}

/// Sets one uniformly random bit when `g` is all zeros.
pub fn repair(g: &mut Genome, rng: &mut impl Rng) {
    if g.none() && !g.is_empty() {
        let j = rng.random_range(0..g.len());
        g.set(j, true);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use proptest::prelude::*;

    fn with_fitness(f: &[f64]) -> Vec<Individual> {
        f.iter()
            .map(|&fitness| Individual { genome: Genome::ones(4), estimated_auc: 0.5, size: 4, dims: 1, fitness })
            .collect()
    }

    #[test]
    fn init_mean_size_tracks_quarter_of_features() {
        let cfg = GAConfig { population_size: 10_000, ..GAConfig::default() };
        let pop = init_population(&cfg, 200, &mut seed::rng(1)).unwrap();
        let mean = pop.iter().map(|g| g.count_ones() as f64).sum::<f64>() / pop.len() as f64;
        // quadrature of clamp(round(x), 1, 200) against the N(50, 40) density;
        // the clamp at 1 lifts the mean to ~52.1
        let (mu, sigma) = (50.0, 40.0);
        let (lo, hi, steps) = (mu - 12.0 * sigma, mu + 12.0 * sigma, 400_000);
        let dx = (hi - lo) / steps as f64;
        let expected: f64 = (0..steps)
            .map(|i| {
                let x = lo + (i as f64 + 0.5) * dx;
                let density = (-0.5 * ((x - mu) / sigma).powi(2)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt());
                x.round().clamp(1.0, 200.0) * density * dx
            })
            .sum();
        assert!((expected - 52.1).abs() < 0.1, "oracle {expected}");
        assert!((mean - expected).abs() < 2.0, "mean {mean} vs {expected}");
        assert!(pop.iter().all(|g| g.count_ones() >= 1));
        let again = init_population(&cfg, 200, &mut seed::rng(1)).unwrap();
        assert_eq!(pop, again);
    }

    #[test]
    fn clamp_rule() {
        assert_eq!(clamp_active_count(-12.0, 200), 1);
        assert_eq!(clamp_active_count(0.4, 200), 1);
        assert_eq!(clamp_active_count(49.5, 200), 50);
        assert_eq!(clamp_active_count(1e6, 200), 200);
    }

    #[test]
    fn tournament_examples() {
        let one = with_fitness(&[0.7]);
        assert_eq!(tournament_select(&one, 5, &mut seed::rng(0)), 0);
        let pop = with_fitness(&[0.9, 0.5, 0.9, 0.9, 0.9]);
        // every contestant drawn: k large enough that index 1 shows up
        assert_eq!(tournament_select(&pop, 200, &mut seed::rng(0)), 1);
    }

    #[test]
    fn tournament_ties_prefer_smaller_then_earlier() {
        let mut pop = with_fitness(&[0.5, 0.5, 0.5]);
        pop[2].size = 2;
        assert_eq!(tournament_select(&pop, 200, &mut seed::rng(3)), 2);
        pop[2].size = 4;
        assert_eq!(tournament_select(&pop, 200, &mut seed::rng(3)), 0);
    }

    #[test]
    fn tournament_frequency_follows_rank() {
        // order statistics of 5 draws with replacement from 10:
        // P(rank r wins) = ((10 - r)^5 - (9 - r)^5) / 10^5
        let fitness: Vec<f64> = (0..10).map(|r| r as f64 / 10.0).collect();
        let pop = with_fitness(&fitness);
        let mut counts = [0usize; 10];
        let mut rng = seed::rng(42);
        let trials = 100_000;
        for _ in 0..trials {
            counts[tournament_select(&pop, 5, &mut rng)] += 1;
        }
        for w in counts.windows(2) {
            assert!(w[0] >= w[1], "{counts:?}");
        }
        for (r, &c) in counts.iter().enumerate() {
            let exact = ((10 - r) as f64).powi(5) - ((9 - r) as f64).powi(5);
            let expected = exact / 1e5;
            let observed = c as f64 / trials as f64;
            assert!((observed - expected).abs() < 0.01, "rank {r}: {observed} vs {expected}");
        }
    }

    #[test]
    fn two_point_trace() {
        let a = Genome::parse_bits("000000").unwrap();
        let b = Genome::parse_bits("111111").unwrap();
        let (ca, cb) = crossover_at(&a, &b, &[2, 4]).unwrap();
        assert_eq!(ca.to_string(), "001100");
        assert_eq!(cb.to_string(), "110011");
    }

    #[test]
    fn crossover_of_equal_parents_is_identity() {
        let a = Genome::parse_bits("0110100111").unwrap();
        let mut rng = seed::rng(5);
        let (x, y) = crossover_5point(&a, &a, &mut rng).unwrap();
        assert_eq!((&x, &y), (&a, &a));
        let (x, y) = crossover_npoint(&a, &a, 20, &mut rng).unwrap();
        assert_eq!((&x, &y), (&a, &a));
    }

    #[test]
    fn crossover_rejects_bad_lengths() {
        let mut rng = seed::rng(0);
        let a = Genome::zeros(6);
        assert!(crossover_5point(&a, &Genome::zeros(7), &mut rng).is_err());
        assert!(crossover_5point(&Genome::zeros(5), &Genome::zeros(5), &mut rng).is_err());
        assert!(crossover_npoint(&a, &Genome::zeros(5), 20, &mut rng).is_err());
    }

    #[test]
    fn mutation_examples() {
        let g = Genome::parse_bits("0101").unwrap();
        let mut rng = seed::rng(0);
        assert_eq!(mutate(&g, 0.0, &mut rng), g);
        assert_eq!(mutate(&g, 1.0, &mut rng).to_string(), "1010");
        let all_ones = Genome::ones(4);
        let repaired = mutate(&all_ones, 1.0, &mut rng);
        assert_eq!(repaired.count_ones(), 1);
    }

    #[test]
    fn mutation_flip_rate() {
        let g = Genome::zeros(480);
        let mut rng = seed::rng(8);
        let n = 10_000;
        let total: usize = (0..n).map(|_| mutate(&g, 0.025, &mut rng).count_ones()).sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 12.0).abs() < 0.5, "mean flips {mean}");
    }

    proptest! {
        #[test]
        fn crossover_conserves_bits_per_column(
            a in proptest::collection::vec(any::<bool>(), 30),
            b in proptest::collection::vec(any::<bool>(), 30),
            seed_value in any::<u64>(),
        ) {
            let (ga, gb) = (Genome::from_bools(&a), Genome::from_bools(&b));
            let mut rng = seed::rng(seed_value);
            for (x, y) in [
                crossover_5point(&ga, &gb, &mut rng).unwrap(),
                crossover_npoint(&ga, &gb, 20, &mut rng).unwrap(),
            ] {
                for j in 0..30 {
                    prop_assert_eq!(x.get(j) as u8 + y.get(j) as u8, a[j] as u8 + b[j] as u8);
                }
            }
        }

        #[test]
        fn mutation_never_returns_empty(bits in proptest::collection::vec(any::<bool>(), 1..40), p in 0.0f64..=1.0) {
            let g = Genome::from_bools(&bits);
            prop_assert!(!mutate(&g, p, &mut seed::rng(1)).none());
        }
    }
}
