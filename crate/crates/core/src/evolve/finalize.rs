use crate::dataset::{DatasetSplit, InteractionDataset};
use crate::error::Result;
use crate::genome::Genome;
use crate::metrics;
use crate::neuralscorer::{fit, Architecture, NeuralScorer, ScorerConfig, TrainedScorer};

/// The full model trained on a selected mask, with its test metrics.
#[derive(Debug, Clone)]
pub struct FinalReport {
    pub model: TrainedScorer,
    pub mask: Genome,
    pub test_auc: f64,
    pub test_log_loss: f64,
    pub n_features: usize,
    pub n_dimensions: usize,
    /// `(dimension name, selected features)` for every touched dimension.
    pub dimension_usage: Vec<(String, usize)>,
}

/// Trains the two-tower model with `mask` as its explicit context on the
/// train and validation ranges for `cfg.epochs_full` epochs, and scores the
/// test range.
pub fn finalize(
    mask: &Genome,
    ds: &InteractionDataset,
    split: &DatasetSplit,
    cfg: &ScorerConfig,
) -> Result<FinalReport> {
    let model = NeuralScorer::init(Architecture::TwoTower, ds.n_users(), ds.n_items(), mask.clone(), cfg)?;
    let trained = fit(model, ds, split.train_and_validation(), None, cfg.epochs_full)?;
    let scored = trained.model.predict(ds, split.test.clone(), None)?;
    let catalog = ds.catalog();
    let dimension_usage = catalog
        .per_dimension_counts(mask)
        .into_iter()
        .zip(catalog.dimensions())
        .filter(|(c, _)| *c > 0)
        .map(|(c, d)| (d.name.clone(), c))
        .collect::<Vec<_>>();
    Ok(FinalReport {
        test_auc: metrics::auc(&scored)?,
        test_log_loss: metrics::log_loss(&scored),
        n_features: mask.count_ones(),
        n_dimensions: dimension_usage.len(),
        dimension_usage,
        mask: mask.clone(),
        model: trained,
    })
}

/// The same full model with no context columns.
pub fn context_free_reference(
    ds: &InteractionDataset,
    split: &DatasetSplit,
    cfg: &ScorerConfig,
) -> Result<FinalReport> {
    finalize(&Genome::zeros(ds.n_features()), ds, split, cfg)
}
