use std::sync::atomic::{AtomicUsize, Ordering};

use super::{EvaluationArchive, Heuristic};
use crate::dataset::{DatasetSplit, InteractionDataset};
use crate::error::Result;
use crate::exec;
use crate::genome::Genome;
use crate::metrics;
use crate::neuralscorer::{predict_masked, train_context, ScorerConfig, TrainedScorer};
use crate::seed;

enum Method<'a> {
    PredictOnly(&'a TrainedScorer),
    FullyTrained(ScorerConfig),
}

/// Estimates the validation AUC a mask would reach, by one of the two
/// heuristics. Shared read-only across worker threads.
pub struct Evaluator<'a> {
    ds: &'a InteractionDataset,
    split: &'a DatasetSplit,
    method: Method<'a>,
    seed: u64,
    trainings: AtomicUsize,
    estimates: AtomicUsize,
}

impl<'a> Evaluator<'a> {
    /// Scores masks by masking the inputs of `surrogate`.
    pub fn predict_only(ds: &'a InteractionDataset, split: &'a DatasetSplit, surrogate: &'a TrainedScorer) -> Self {
        Evaluator {
            ds,
            split,
            method: Method::PredictOnly(surrogate),
            seed: 0,
            trainings: AtomicUsize::new(0),
            estimates: AtomicUsize::new(0),
        }
    }

    /// Scores masks by training the context-only sub-network for
    /// `cfg.epochs_heuristic` epochs. Each training is seeded from `seed`
    /// and the genome's (generation, index) position.
    pub fn fully_trained(ds: &'a InteractionDataset, split: &'a DatasetSplit, cfg: &ScorerConfig, seed: u64) -> Self {
        Evaluator {
            ds,
            split,
            method: Method::FullyTrained(cfg.clone()),
            seed,
            trainings: AtomicUsize::new(0),
            estimates: AtomicUsize::new(0),
        }
    }

    pub fn heuristic(&self) -> Heuristic {
        match self.method {
            Method::PredictOnly(_) => Heuristic::PredictOnly,
            Method::FullyTrained(_) => Heuristic::FullyTrained,
        }
    }

    /// Number of networks trained so far.
    pub fn trainings(&self) -> usize {
        self.trainings.load(Ordering::Relaxed)
    }

    /// Number of un-memoized AUC estimates computed so far.
    pub fn estimates(&self) -> usize {
        self.estimates.load(Ordering::Relaxed)
    }

    /// Validation AUC estimate for `genome`, without memoization.
    pub fn estimate(&self, genome: &Genome, generation: usize, index: usize) -> Result<f64> {
        self.estimates.fetch_add(1, Ordering::Relaxed);
        let validation = self.split.validation.clone();
        let scored = match &self.method {
            Method::PredictOnly(surrogate) => predict_masked(surrogate, self.ds, genome, validation)?,
            Method::FullyTrained(cfg) => {
                let cfg = cfg.with_seed(seed::derive(self.seed, "evaluate", &[generation as u64, index as u64]));
                self.trainings.fetch_add(1, Ordering::Relaxed);
                let trained = train_context(self.ds, self.split, genome, &cfg, cfg.epochs_heuristic)?;
                trained.model.predict(self.ds, validation, None)?
            }
        };
        metrics::auc(&scored)
    }

    /// Memoized estimate: genomes already in `archive` are not re-evaluated.
    pub fn evaluate(
        &self,
        genome: &Genome,
        archive: &mut EvaluationArchive,
        generation: usize,
        index: usize,
    ) -> Result<f64> {
        if let Some(e) = archive.get(genome) {
            return Ok(e.estimated_auc);
        }
        let auc = self.estimate(genome, generation, index)?;
        archive.insert(genome.clone(), auc, generation);
        Ok(auc)
    }

    /// Estimates for a whole generation. Genomes not yet archived are
    /// evaluated concurrently, then archived in population order, so the
    /// result and the archive do not depend on the thread count.
    pub fn evaluate_generation(
        &self,
        genomes: &[Genome],
        generation: usize,
        archive: &mut EvaluationArchive,
    ) -> Result<Vec<f64>> {
        let mut pending: Vec<(usize, &Genome)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (i, g) in genomes.iter().enumerate() {
            if !archive.contains(g) && seen.insert(g) {
                pending.push((i, g));
            }
        }
        let results = exec::map(&pending, |_, &(i, g)| self.estimate(g, generation, i));
        for ((_, g), auc) in pending.iter().zip(results) {
            archive.insert((*g).clone(), auc?, generation);
        }
        Ok(genomes.iter().map(|g| archive.get(g).expect("archived above").estimated_auc).collect())
    }
}
