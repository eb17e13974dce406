//! The run stages as library calls; commands add only file I/O around them.

use ctxevo_core::dataset::{
    chronological_split, generate_synthetic, load_csv, DatasetSplit, InteractionDataset, PlantedSet,
};
use ctxevo_core::ensemble::{build_ensemble, EnsembleResult};
use ctxevo_core::evolve::{
    context_free_reference, finalize, run_evolution, Evaluator, EvolutionResult, FinalReport, FitnessKind, GAConfig,
    Heuristic,
};
use ctxevo_core::neuralscorer::{train_surrogate, ScorerConfig, TrainedScorer};
use ctxevo_core::seed;

use crate::config::RunConfig;
use crate::error::CliResult;

/// Sub-seeds fanned out from the run seed, one per stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seeds {
    pub data: u64,
    pub surrogate: u64,
    pub heuristic: u64,
    pub ga: u64,
    pub final_model: u64,
    pub ensemble: u64,
}

impl Seeds {
    pub fn new(run_seed: u64) -> Self {
        let d = |label| seed::derive(run_seed, label, &[]);
        Seeds {
            data: d("data"),
            surrogate: d("surrogate"),
            heuristic: d("heuristic"),
            ga: d("ga"),
            final_model: d("final"),
            ensemble: d("ensemble"),
        }
    }
}

pub struct LoadedData {
    pub dataset: InteractionDataset,
    pub split: DatasetSplit,
    /// Known only for generated data.
    pub planted: Option<PlantedSet>,
}

pub fn load_data(cfg: &RunConfig, seeds: &Seeds) -> CliResult<LoadedData> {
    let (dataset, planted) = match (&cfg.data, &cfg.synth) {
        (Some(d), _) => (load_csv(&d.dataset, &d.catalog)?, None),
        (None, Some(spec)) => {
            let s = generate_synthetic(spec, seeds.data)?;
            (s.dataset, Some(s.planted))
        }
        (None, None) => return Err(crate::error::CliError::Input("config needs a [data] or [synth] section".into())),
    };
    let split = chronological_split(&dataset)?;
    Ok(LoadedData { dataset, split, planted })
}

/// Command-line overrides of the `[ga]` section.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvolveOverrides {
    pub fitness: Option<FitnessKind>,
    pub heuristic: Option<Heuristic>,
    pub generations: Option<usize>,
}

pub fn ga_config(cfg: &RunConfig, seeds: &Seeds, o: &EvolveOverrides) -> GAConfig {
    let mut ga = cfg.ga.clone();
    if let Some(f) = o.fitness {
        if f != ga.fitness {
            // Explicit weights belong to the configured fitness kind.
            ga.weights = None;
        }
        ga.fitness = f;
    }
    if let Some(h) = o.heuristic {
        ga.heuristic = h;
    }
    if let Some(g) = o.generations {
        ga.generations = g;
    }
    ga.rng_seed = seeds.ga;
    ga
}

pub fn surrogate(data: &LoadedData, scorer: &ScorerConfig, seeds: &Seeds) -> CliResult<TrainedScorer> {
    Ok(train_surrogate(&data.dataset, &data.split, &scorer.with_seed(seeds.surrogate))?)
}

pub struct EvolveOutcome {
    pub ga: GAConfig,
    pub result: EvolutionResult,
    pub surrogate: Option<TrainedScorer>,
    pub best: FinalReport,
    /// Distinct genomes estimated during the search.
    pub estimates: usize,
}

/// Search, then the full model on the best genome. A predict-only run trains
/// the surrogate unless one is supplied.
pub fn evolve(
    data: &LoadedData,
    cfg: &RunConfig,
    seeds: &Seeds,
    overrides: &EvolveOverrides,
    surrogate_model: Option<TrainedScorer>,
) -> CliResult<EvolveOutcome> {
    let ga = ga_config(cfg, seeds, overrides);
    ga.validate()?;
    let (ds, split) = (&data.dataset, &data.split);
    let sur = match ga.heuristic {
        Heuristic::PredictOnly => Some(match surrogate_model {
            Some(s) => s,
            None => surrogate(data, &cfg.scorer, seeds)?,
        }),
        Heuristic::FullyTrained => None,
    };
    let evaluator = match &sur {
        Some(s) => Evaluator::predict_only(ds, split, s),
        None => Evaluator::fully_trained(ds, split, &cfg.scorer, seeds.heuristic),
    };
    let result = run_evolution(ds, split, &ga, &evaluator)?;
    let estimates = evaluator.estimates();
    let best = finalize(&result.best.genome, ds, split, &cfg.scorer.with_seed(seeds.final_model))?;
    Ok(EvolveOutcome { ga, result, surrogate: sur, best, estimates })
}

/// The context-free model under the same seed as the finalized one.
pub fn baseline(data: &LoadedData, cfg: &RunConfig, seeds: &Seeds) -> CliResult<FinalReport> {
    Ok(context_free_reference(&data.dataset, &data.split, &cfg.scorer.with_seed(seeds.final_model))?)
}

pub fn ensemble(
    data: &LoadedData,
    archive: &ctxevo_core::evolve::EvaluationArchive,
    cfg: &RunConfig,
    seeds: &Seeds,
) -> CliResult<EnsembleResult> {
    Ok(build_ensemble(&data.dataset, &data.split, archive, &cfg.scorer, &cfg.ensemble, seeds.ensemble)?)
}

pub const SUMMARY_HEADER: &str = "dims,features,explicit,auc,log_loss";

/// One header line and one value line; `explicit` is `V` when the model
/// reads any context column.
pub fn summary_csv(dims: usize, features: usize, auc: f64, log_loss: f64) -> String {
    let explicit = if features > 0 { "V" } else { "X" };
    format!("{SUMMARY_HEADER}\n{dims},{features},{explicit},{auc},{log_loss}\n")
}
