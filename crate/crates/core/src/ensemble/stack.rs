use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::dbscan::{dbscan_cluster, NOISE};
use super::logistic::LogisticModel;
use super::select::{pick_representatives, select_top_unique};
use super::EnsembleConfig;
use crate::dataset::{DatasetSplit, InteractionDataset};
use crate::error::{Error, Result};
use crate::evolve::EvaluationArchive;
use crate::genome::Genome;
use crate::metrics::{self, ScoredLabels};
use crate::neuralscorer::{train, ScorerConfig, TrainedScorer};
use crate::{exec, seed};

/// Full base models combined by a logistic meta-learner over their
/// probabilities.
#[derive(Debug, Clone)]
pub struct StackedModel {
    pub bases: Vec<TrainedScorer>,
    pub meta: LogisticModel,
}

impl StackedModel {
    /// Base-model probabilities, one row per record of `range`.
    pub fn base_scores(&self, ds: &InteractionDataset, range: Range<usize>) -> Result<Vec<Vec<f64>>> {
        let per_base = exec::map(&self.bases, |_, b| b.model.predict(ds, range.clone(), None));
        let per_base = per_base.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(transpose(&per_base))
    }

    pub fn predict(&self, ds: &InteractionDataset, range: Range<usize>) -> Result<ScoredLabels> {
        let rows = self.base_scores(ds, range.clone())?;
        let scores = rows.iter().map(|r| self.meta.predict(r)).collect();
        ScoredLabels::new(scores, ds.labels(range))
    }
}

fn transpose(per_base: &[ScoredLabels]) -> Vec<Vec<f64>> {
    let n = per_base.first().map_or(0, |s| s.len());
    (0..n).map(|i| per_base.iter().map(|s| s.scores()[i]).collect()).collect()
}

/// Trains one full model per mask on the train range (seeded per index),
/// then the meta-learner on their validation predictions.
pub fn train_stack(
    ds: &InteractionDataset,
    split: &DatasetSplit,
    masks: &[Genome],
    scorer: &ScorerConfig,
    meta_l2: f64,
    rng_seed: u64,
) -> Result<StackedModel> {
    if masks.is_empty() {
        return Err(Error::Invalid("stacking needs at least one base mask".into()));
    }
    let bases = exec::map(masks, |i, m| {
        let cfg = scorer.with_seed(seed::derive(rng_seed, "ensemble/base", &[i as u64]));
        train(ds, split, m, &cfg)
    });
    let bases = bases.into_iter().collect::<Result<Vec<_>>>()?;
    let mut stacked =
        StackedModel { bases, meta: LogisticModel { intercept: 0.0, coefficients: vec![0.0; masks.len()] } };
    let x = stacked.base_scores(ds, split.validation.clone())?;
    stacked.meta = LogisticModel::fit(&x, &ds.labels(split.validation.clone()), meta_l2)?;
    Ok(stacked)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseReport {
    pub genome: String,
    pub n_features: usize,
    pub dimensions: Vec<String>,
    pub estimated_auc: f64,
    pub test_auc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub candidates: usize,
    pub clusters: usize,
    pub noise: usize,
    pub bases: Vec<BaseReport>,
    pub meta: LogisticModel,
    pub test_auc: f64,
    pub test_log_loss: f64,
    pub best_base_test_auc: f64,
    /// Features / dimensions selected by at least one base model.
    pub n_features: usize,
    pub n_dimensions: usize,
}

#[derive(Debug, Clone)]
pub struct EnsembleResult {
    pub representatives: Vec<Genome>,
    pub labels: Vec<i64>,
    pub model: StackedModel,
    pub report: EnsembleReport,
}

/// Top-k selection, clustering, representative training and stacking.
pub fn build_ensemble(
    ds: &InteractionDataset,
    split: &DatasetSplit,
    archive: &EvaluationArchive,
    scorer: &ScorerConfig,
    cfg: &EnsembleConfig,
    rng_seed: u64,
) -> Result<EnsembleResult> {
    cfg.validate()?;
    if archive.len() < 2 {
        return Err(Error::Invalid(format!("an ensemble needs at least 2 archived genomes, got {}", archive.len())));
    }
    let candidates = select_top_unique(archive, cfg.top_k_unique);
    let labels = dbscan_cluster(&candidates, cfg.dbscan_eps, cfg.dbscan_min_pts);
    let representatives = pick_representatives(&candidates, &labels, cfg.max_representatives)?;
    let model = train_stack(ds, split, &representatives, scorer, cfg.meta_l2, rng_seed)?;

    let catalog = ds.catalog();
    let mut bases = Vec::with_capacity(representatives.len());
    for (g, b) in representatives.iter().zip(&model.bases) {
        bases.push(BaseReport {
            genome: g.to_hex(),
            n_features: g.count_ones(),
            dimensions: catalog.dimension_names(g).into_iter().map(String::from).collect(),
            estimated_auc: archive.get(g).map_or(f64::NAN, |e| e.estimated_auc),
            test_auc: metrics::auc(&b.model.predict(ds, split.test.clone(), None)?)?,
        });
    }
    let scored = model.predict(ds, split.test.clone())?;
    let union = representatives.iter().skip(1).fold(representatives[0].clone(), |acc, g| acc.union(g));
    let clusters = labels.iter().filter(|&&l| l != NOISE).map(|&l| l + 1).max().unwrap_or(0) as usize;
    let report = EnsembleReport {
        candidates: candidates.len(),
        clusters,
        noise: labels.iter().filter(|&&l| l == NOISE).count(),
        best_base_test_auc: bases.iter().map(|b| b.test_auc).fold(f64::NEG_INFINITY, f64::max),
        bases,
        meta: model.meta.clone(),
        test_auc: metrics::auc(&scored)?,
        test_log_loss: metrics::log_loss(&scored),
        n_features: union.count_ones(),
        n_dimensions: catalog.dimension_count(&union),
    };
    Ok(EnsembleResult { representatives, labels, model, report })
}
