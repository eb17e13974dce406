use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;

use super::network::{self, Architecture, Block, Input, Layout, Workspace};
use super::ScorerConfig;
use crate::dataset::{DatasetSplit, InteractionDataset, InteractionRecord};
use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::metrics::{self, ScoredLabels};
use crate::seed;

/// Parameters of one scorer network plus the context mask feeding it.
#[derive(Debug, Clone, PartialEq)]
pub struct NeuralScorer {
    pub(crate) arch: Architecture,
    pub(crate) config: ScorerConfig,
    pub(crate) n_users: usize,
    pub(crate) n_items: usize,
    pub(crate) mask: Genome,
    pub(crate) layout: Layout,
    pub(crate) params: Vec<f64>,
    active: Vec<usize>,
}

/// Per-epoch training record.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EpochStats {
    pub train_loss: f64,
    pub validation_auc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedScorer {
    pub model: NeuralScorer,
    pub history: Vec<EpochStats>,
}

impl NeuralScorer {
    /// A freshly initialized network: weights uniform in
    /// `±sqrt(6 / (fan_in + fan_out))`, biases zero. The context block of the first layer
    /// counts only the masked-in columns towards its fan-in.
    pub fn init(
        arch: Architecture,
        n_users: usize,
        n_items: usize,
        mask: Genome,
        config: &ScorerConfig,
    ) -> Result<Self> {
        config.validate()?;
        let mut model = NeuralScorer::zeroed(arch, n_users, n_items, mask, config, config.use_bias)?;
        let mut rng = seed::rng_for(config.rng_seed, "scorer/init", &[]);
        let layout = model.layout.clone();
        let p = &mut model.params;
        let mut fill = |range: Range<usize>, fan: usize, rng: &mut seed::Rng| {
            let a = (6.0 / fan.max(1) as f64).sqrt();
            for v in &mut p[range] {
                *v = rng.random_range(-a..=a);
            }
        };
        if let Some(e) = layout.emb {
            fill(e.user_gmf..e.item_gmf, n_users + e.dim, &mut rng);
            fill(e.item_gmf..e.user_mlp, n_items + e.dim, &mut rng);
            fill(e.user_mlp..e.item_mlp, n_users + e.dim, &mut rng);
            fill(e.item_mlp..e.item_mlp + n_items * e.dim, n_items + e.dim, &mut rng);
        }
        let selected = model.mask.count_ones();
        for (l, d) in layout.hidden.iter().enumerate() {
            let fan_in = if l == 0 { layout.emb_inputs + selected } else { d.n_in };
            fill(d.w..d.w + d.n_in * d.n_out, fan_in + d.n_out, &mut rng);
        }
        let o = layout.output;
        fill(o.w..o.w + o.n_in, o.n_in + 1, &mut rng);
        Ok(model)
    }

    /// All parameters zero.
    pub fn zeroed(
        arch: Architecture,
        n_users: usize,
        n_items: usize,
        mask: Genome,
        config: &ScorerConfig,
        use_bias: bool,
    ) -> Result<Self> {
        config.validate()?;
        if mask.is_empty() {
            return Err(Error::Invalid("mask has length 0".into()));
        }
        if arch == Architecture::TwoTower && (n_users == 0 || n_items == 0) {
            return Err(Error::Invalid("two-tower model needs users and items".into()));
        }
        let config = ScorerConfig { use_bias, ..config.clone() };
        let layout =
            Layout::new(arch, n_users, n_items, mask.len(), config.embedding_dim, &config.mlp_hidden, use_bias);
        let active = mask.ones_indices();
        Ok(NeuralScorer { arch, params: vec![0.0; layout.total], layout, config, n_users, n_items, mask, active })
    }

    pub(crate) fn from_parts(
        arch: Architecture,
        config: ScorerConfig,
        n_users: usize,
        n_items: usize,
        mask: Genome,
        params: Vec<f64>,
    ) -> Result<Self> {
        let mut model = NeuralScorer::zeroed(arch, n_users, n_items, mask, &config, config.use_bias)?;
        if params.len() != model.params.len() {
            return Err(Error::Shape(format!(
                "checkpoint has {} parameters, architecture needs {}",
                params.len(),
                model.params.len()
            )));
        }
        model.params = params;
        Ok(model)
    }

    pub fn architecture(&self) -> Architecture {
        self.arch
    }

    pub fn config(&self) -> &ScorerConfig {
        &self.config
    }

    pub fn mask(&self) -> &Genome {
        &self.mask
    }

    pub fn n_features(&self) -> usize {
        self.mask.len()
    }

    pub fn has_bias(&self) -> bool {
        self.layout.has_bias()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn blocks(&self) -> Vec<Block> {
        self.layout.blocks()
    }

    fn check_record(&self, r: &InteractionRecord) -> Result<()> {
        if r.context.len() != self.n_features() {
            return Err(Error::Shape(format!(
                "record has {} context features, model expects {}",
                r.context.len(),
                self.n_features()
            )));
        }
        if self.arch == Architecture::TwoTower && (r.user_id >= self.n_users || r.item_id >= self.n_items) {
            return Err(Error::Invalid(format!(
                "user {} / item {} outside the {} x {} embedding tables",
                r.user_id, r.item_id, self.n_users, self.n_items
            )));
        }
        Ok(())
    }

    fn logit(&self, r: &InteractionRecord, active: &[usize], ws: &mut Workspace) -> f64 {
        network::forward(
            &self.params,
            &self.layout,
            Input { user: r.user_id, item: r.item_id, context: &r.context, active },
            ws,
        )
    }

    /// Inference-mode scores in (0, 1).
    pub fn forward(&self, batch: &[&InteractionRecord]) -> Result<Vec<f64>> {
        self.forward_masked(batch, None)
    }

    /// Inference-mode scores with the extra mask `prediction_mask` applied on
    /// top of the model's own mask; unselected columns are treated as zero.
    pub fn forward_masked(&self, batch: &[&InteractionRecord], prediction_mask: Option<&Genome>) -> Result<Vec<f64>> {
        let active = self.active_for(prediction_mask)?;
        let mut ws = Workspace::new(&self.layout);
        batch
            .iter()
            .map(|r| {
                self.check_record(r)?;
                Ok(network::sigmoid(self.logit(r, &active, &mut ws)))
            })
            .collect()
    }

    fn active_for(&self, prediction_mask: Option<&Genome>) -> Result<Vec<usize>> {
        match prediction_mask {
            None => Ok(self.active.clone()),
            Some(m) if m.len() != self.n_features() => {
                Err(Error::Shape(format!("mask has length {}, model has {} features", m.len(), self.n_features())))
            }
            Some(m) => Ok(self.mask.and(m).ones_indices()),
        }
    }

    /// Scores and labels over `range` of `ds`.
    pub fn predict(
        &self,
        ds: &InteractionDataset,
        range: Range<usize>,
        prediction_mask: Option<&Genome>,
    ) -> Result<ScoredLabels> {
        let records: Vec<&InteractionRecord> = ds.records()[range.clone()].iter().collect();
        let scores = self.forward_masked(&records, prediction_mask)?;
        ScoredLabels::new(scores, ds.labels(range))
    }

    /// Mean loss and its gradient over `batch`, inference mode.
    pub(crate) fn loss_and_grad(&self, batch: &[&InteractionRecord], grad: &mut [f64]) -> f64 {
        let mut ws = Workspace::new(&self.layout);
        grad.iter_mut().for_each(|g| *g = 0.0);
        let scale = 1.0 / batch.len() as f64;
        let mut loss = 0.0;
        for r in batch {
            let y = r.label as f64;
            let z = self.logit(r, &self.active, &mut ws);
            loss += network::bce_with_logit(z, y);
            let d = (network::sigmoid(z) - y) * scale;
            network::backward(&self.params, &self.layout, self.input(r), &mut ws, d, grad);
        }
        loss * scale
    }

    pub(crate) fn loss(&self, batch: &[&InteractionRecord]) -> f64 {
        let mut ws = Workspace::new(&self.layout);
        let total: f64 =
            batch.iter().map(|r| network::bce_with_logit(self.logit(r, &self.active, &mut ws), r.label as f64)).sum();
        total / batch.len() as f64
    }

    fn input<'a>(&'a self, r: &'a InteractionRecord) -> Input<'a> {
        Input { user: r.user_id, item: r.item_id, context: &r.context, active: &self.active }
    }
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    fn new(n: usize) -> Self {
        Adam { m: vec![0.0; n], v: vec![0.0; n], t: 0 }
    }

    fn step(&mut self, cfg: &ScorerConfig, params: &mut [f64], grad: &[f64]) {
        self.t += 1;
        let c1 = 1.0 - cfg.beta1.powi(self.t);
        let c2 = 1.0 - cfg.beta2.powi(self.t);
        let lr = cfg.learning_rate;
        for (((p, &g), m), v) in params.iter_mut().zip(grad).zip(&mut self.m).zip(&mut self.v) {
            if g == 0.0 && *m == 0.0 && *v == 0.0 {
                continue;
            }
            *m = cfg.beta1 * *m + (1.0 - cfg.beta1) * g;
            *v = cfg.beta2 * *v + (1.0 - cfg.beta2) * g * g;
            *p -= lr * (*m / c1) / ((*v / c2).sqrt() + cfg.epsilon);
        }
    }
}

/// Mini-batch Adam on `train`, `epochs` passes, optional per-epoch
/// validation AUC. Dropout applies to the fused vector of two-tower models.
pub fn fit(
    mut model: NeuralScorer,
    ds: &InteractionDataset,
    train: Range<usize>,
    validation: Option<Range<usize>>,
    epochs: usize,
) -> Result<TrainedScorer> {
    if train.is_empty() {
        return Err(Error::Invalid("empty training range".into()));
    }
    if model.n_features() != ds.n_features() {
        return Err(Error::Shape(format!(
            "model has {} features, dataset has {}",
            model.n_features(),
            ds.n_features()
        )));
    }
    for r in &ds.records()[train.clone()] {
        model.check_record(r)?;
    }

    let cfg = model.config.clone();
    let dropout = model.arch == Architecture::TwoTower && cfg.dropout_rate > 0.0;
    let mut shuffle_rng = seed::rng_for(cfg.rng_seed, "scorer/shuffle", &[]);
    let mut dropout_rng = seed::rng_for(cfg.rng_seed, "scorer/dropout", &[]);
    let mut adam = Adam::new(model.params.len());
    let mut grad = vec![0.0; model.params.len()];
    let mut ws = Workspace::new(&model.layout);
    let mut order: Vec<usize> = train.clone().collect();
    let records = ds.records();
    let mut history = Vec::with_capacity(epochs);

    for _ in 0..epochs {
        order.shuffle(&mut shuffle_rng);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            grad.iter_mut().for_each(|g| *g = 0.0);
            let scale = 1.0 / batch.len() as f64;
            for &k in batch {
                let r = &records[k];
                if dropout {
                    let keep = 1.0 - cfg.dropout_rate;
                    ws.set_dropout(Some(&mut || dropout_rng.random::<f64>() < keep), cfg.dropout_rate);
                }
                let y = r.label as f64;
                let z = model.logit(r, &model.active, &mut ws);
                epoch_loss += network::bce_with_logit(z, y);
                let d = (network::sigmoid(z) - y) * scale;
                network::backward(&model.params, &model.layout, model.input(r), &mut ws, d, &mut grad);
            }
            adam.step(&cfg, &mut model.params, &grad);
        }
        ws.set_dropout(None, 0.0);
        let validation_auc = match &validation {
            Some(v) if !v.is_empty() => Some(metrics::auc(&model.predict(ds, v.clone(), None)?)?),
            _ => None,
        };
        history.push(EpochStats { train_loss: epoch_loss / train.len() as f64, validation_auc });
    }
    Ok(TrainedScorer { model, history })
}

/// The full two-tower model on `mask`, trained on the train range with
/// validation AUC tracked per epoch, for `cfg.epochs_full` epochs.
pub fn train(
    ds: &InteractionDataset,
    split: &DatasetSplit,
    mask: &Genome,
    cfg: &ScorerConfig,
) -> Result<TrainedScorer> {
    check_mask(ds, mask)?;
    let model = NeuralScorer::init(Architecture::TwoTower, ds.n_users(), ds.n_items(), mask.clone(), cfg)?;
    fit(model, ds, split.train.clone(), Some(split.validation.clone()), cfg.epochs_full)
}

/// The context-only sub-network on the columns of `mask`, used by the
/// fully-trained heuristic.
pub fn train_context(
    ds: &InteractionDataset,
    split: &DatasetSplit,
    mask: &Genome,
    cfg: &ScorerConfig,
    epochs: usize,
) -> Result<TrainedScorer> {
    check_mask(ds, mask)?;
    let model = NeuralScorer::init(Architecture::ContextOnly, 0, 0, mask.clone(), cfg)?;
    fit(model, ds, split.train.clone(), Some(split.validation.clone()), epochs)
}

/// The bias-free context-only network over all features, trained once for
/// the predict-only heuristic.
pub fn train_surrogate(ds: &InteractionDataset, split: &DatasetSplit, cfg: &ScorerConfig) -> Result<TrainedScorer> {
    let cfg = ScorerConfig { use_bias: false, ..cfg.clone() };
    let mask = Genome::ones(ds.n_features());
    let model = NeuralScorer::init(Architecture::ContextOnly, 0, 0, mask, &cfg)?;
    fit(model, ds, split.train.clone(), Some(split.validation.clone()), cfg.epochs_full)
}

/// Surrogate scores on `range` with the columns outside `mask` zeroed.
pub fn predict_masked(
    surrogate: &TrainedScorer,
    ds: &InteractionDataset,
    mask: &Genome,
    range: Range<usize>,
) -> Result<ScoredLabels> {
    let m = &surrogate.model;
    if m.arch != Architecture::ContextOnly || m.has_bias() {
        return Err(Error::Invalid("predict_masked needs a bias-free context-only surrogate".into()));
    }
    m.predict(ds, range, Some(mask))
}

fn check_mask(ds: &InteractionDataset, mask: &Genome) -> Result<()> {
    if mask.len() != ds.n_features() {
        return Err(Error::Shape(format!("mask has length {}, dataset has {} features", mask.len(), ds.n_features())));
    }
    Ok(())
}
