use std::fmt::Write as _;

use rand::Rng;

use super::fitness::{self, Normalizers};
use super::operators::{crossover_5point, crossover_npoint, init_population, mutate, tournament_select};
use super::{EvaluationArchive, Evaluator, GAConfig, Individual};
use crate::dataset::{DatasetSplit, FeatureCatalog, InteractionDataset};
use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::seed;

/// Summary of one generation's best individual.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_fitness: f64,
    pub best_auc: f64,
    pub best_size: usize,
    pub best_dims: usize,
    /// Selected features of the best individual, per catalog dimension.
    pub per_dimension: Vec<usize>,
    /// Highest estimated AUC in the archive so far.
    pub archive_best_auc: f64,
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub best: Individual,
    pub archive: EvaluationArchive,
    pub stats: Vec<GenerationStats>,
}

/// Index of the best individual: lowest fitness, then smaller size, then
/// earlier position.
fn argmin(pop: &[Individual]) -> usize {
    (0..pop.len())
        .min_by(|&a, &b| pop[a].fitness.total_cmp(&pop[b].fitness).then(pop[a].size.cmp(&pop[b].size)).then(a.cmp(&b)))
        .expect("non-empty population")
}

/// Generational GA: evaluate, assign fitness, tournament-select parents,
/// pair them, cross over with `crossover_prob`, mutate every child.
///
/// The population has no elitism; the archive keeps every evaluated genome.
/// The returned best individual is the archived genome with the lowest
/// fitness under the final generation's normalizers.
pub fn run_evolution(
    ds: &InteractionDataset,
    split: &DatasetSplit,
    cfg: &GAConfig,
    evaluator: &Evaluator<'_>,
) -> Result<EvolutionResult> {
    cfg.validate()?;
    if split.validation.is_empty() {
        return Err(Error::Invalid("evolution needs a validation range".into()));
    }
    let catalog = ds.catalog();
    let len = ds.n_features();
    let weights = cfg.weights();
    let mut rng = seed::rng_for(cfg.rng_seed, "ga", &[]);
    let mut genomes = init_population(cfg, len, &mut rng)?;
    let mut archive = EvaluationArchive::new();
    let mut stats = Vec::with_capacity(cfg.generations + 1);
    let mut final_norm = None;

    for generation in 0..=cfg.generations {
        let aucs = evaluator.evaluate_generation(&genomes, generation, &mut archive)?;
        let mut pop: Vec<Individual> =
            genomes.iter().zip(aucs).map(|(g, auc)| Individual::new(g.clone(), auc, catalog)).collect();
        fitness::assign(&mut pop, &weights, cfg.fitness);

        let best = &pop[argmin(&pop)];
        stats.push(GenerationStats {
            generation,
            best_fitness: best.fitness,
            best_auc: best.estimated_auc,
            best_size: best.size,
            best_dims: best.dims,
            per_dimension: catalog.per_dimension_counts(&best.genome),
            archive_best_auc: archive.best_auc().unwrap_or(f64::NAN),
        });
        final_norm = Some(Normalizers::of(&pop));
        if generation == cfg.generations {
            break;
        }
        genomes = breed(&pop, cfg, len, &mut rng)?;
    }

    let norm = final_norm.expect("at least one generation");
    let mut candidates: Vec<Individual> =
        archive.iter().map(|(g, e)| Individual::new(g.clone(), e.estimated_auc, catalog)).collect();
    for c in &mut candidates {
        c.fitness = norm.fitness(c, &weights, cfg.fitness);
    }
    let best = candidates.swap_remove(argmin(&candidates));
    Ok(EvolutionResult { best, archive, stats })
}

fn breed(pop: &[Individual], cfg: &GAConfig, len: usize, rng: &mut seed::Rng) -> Result<Vec<Genome>> {
    let parents: Vec<usize> = (0..cfg.population_size).map(|_| tournament_select(pop, cfg.tournament_k, rng)).collect();
    let mut children = Vec::with_capacity(cfg.population_size);
    for pair in parents.chunks(2) {
        let a = &pop[pair[0]].genome;
        match pair.get(1) {
            Some(&j) => {
                let b = &pop[j].genome;
                let (ca, cb) = if rng.random_bool(cfg.crossover_prob) {
                    if len >= 6 && rng.random_bool(cfg.five_point_prob) {
                        crossover_5point(a, b, rng)?
                    } else {
                        crossover_npoint(a, b, cfg.max_npoint, rng)?
                    }
                } else {
                    (a.clone(), b.clone())
                };
                children.push(mutate(&ca, cfg.bitflip_prob, rng));
                children.push(mutate(&cb, cfg.bitflip_prob, rng));
            }
            None => children.push(mutate(a, cfg.bitflip_prob, rng)),
        }
    }
    Ok(children)
}

/// `generation,best_fitness,best_auc,best_size,best_dims,<dimension...>`.
pub fn stats_csv(stats: &[GenerationStats], catalog: &FeatureCatalog) -> String {
    let mut out = String::from("generation,best_fitness,best_auc,best_size,best_dims");
    for d in catalog.dimensions() {
        out.push(',');
        out.push_str(&d.name);
    }
    out.push('\n');
    for s in stats {
        let _ = write!(out, "{},{},{},{},{}", s.generation, s.best_fitness, s.best_auc, s.best_size, s.best_dims);
        for c in &s.per_dimension {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
    }
    out
}
