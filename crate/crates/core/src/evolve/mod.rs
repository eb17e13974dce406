//! Genetic search over context masks.

mod archive;
mod config;
mod evaluate;
mod finalize;
pub mod fitness;
pub mod operators;
mod run;

pub use archive::{ArchiveEntry, EvaluationArchive, ARCHIVE_HEADER};
pub use config::{FitnessKind, FitnessWeights, GAConfig, Heuristic};
pub use evaluate::Evaluator;
pub use finalize::{context_free_reference, finalize, FinalReport};
pub use fitness::{fitness_basic, fitness_dimension, phi, Normalizers};
pub use operators::{crossover_5point, crossover_npoint, init_population, mutate, tournament_select};
pub use run::{run_evolution, stats_csv, EvolutionResult, GenerationStats};

use crate::dataset::FeatureCatalog;
use crate::genome::Genome;

/// A genome with its cached evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    pub estimated_auc: f64,
    /// Selected feature count.
    pub size: usize,
    /// Dimensions with at least one selected feature.
    pub dims: usize,
    /// Lower is better; `NaN` until assigned.
    pub fitness: f64,
}

impl Individual {
    pub fn new(genome: Genome, estimated_auc: f64, catalog: &FeatureCatalog) -> Self {
        Individual {
            size: genome.count_ones(),
            dims: catalog.dimension_count(&genome),
            genome,
            estimated_auc,
            fitness: f64::NAN,
        }
    }
}
