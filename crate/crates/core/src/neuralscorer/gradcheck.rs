//! Analytic gradients against central finite differences.

use rand::Rng;

use super::model::NeuralScorer;
use super::network::Architecture;
use super::ScorerConfig;
use crate::dataset::InteractionRecord;
use crate::genome::Genome;
use crate::seed;

pub const FD_STEP: f64 = 1e-4;

/// Largest relative error per parameter block.
#[derive(Debug, Clone)]
pub struct GradientReport {
    pub blocks: Vec<(String, f64)>,
}

impl GradientReport {
    pub fn max_relative_error(&self) -> f64 {
        self.blocks.iter().map(|(_, e)| *e).fold(0.0, f64::max)
    }
}

/// `|a - n| / max(|a|, |n|, floor)`; the floor keeps entries that are zero
/// up to rounding from reporting huge relative errors.
fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-7)
}

/// Checks `model`'s loss gradient on `batch`, every parameter.
pub fn check_model(model: &NeuralScorer, batch: &[&InteractionRecord]) -> GradientReport {
    let mut grad = vec![0.0; model.params().len()];
    model.loss_and_grad(batch, &mut grad);
    let mut probe = model.clone();
    let blocks = model
        .blocks()
        .into_iter()
        .map(|b| {
            let mut worst: f64 = 0.0;
            for k in b.range.clone() {
                let orig = probe.params()[k];
                probe.params_mut()[k] = orig + FD_STEP;
                let up = probe.loss(batch);
                probe.params_mut()[k] = orig - FD_STEP;
                let down = probe.loss(batch);
                probe.params_mut()[k] = orig;
                let numeric = (up - down) / (2.0 * FD_STEP);
                worst = worst.max(relative_error(grad[k], numeric));
            }
            (b.name, worst)
        })
        .collect();
    GradientReport { blocks }
}

/// Builds small random two-tower and context-only models (with biases when
/// `cfg.use_bias`), a random batch of `probe_size` records over 5 context
/// features, and checks every parameter block of both.
pub fn gradient_check(cfg: &ScorerConfig, probe_size: usize) -> crate::Result<GradientReport> {
    const USERS: usize = 3;
    const ITEMS: usize = 4;
    const FEATURES: usize = 5;
    let mut rng = seed::rng_for(cfg.rng_seed, "gradcheck", &[]);
    let records: Vec<InteractionRecord> = (0..probe_size.max(1))
        .map(|k| InteractionRecord {
            user_id: rng.random_range(0..USERS),
            item_id: rng.random_range(0..ITEMS),
            context: (0..FEATURES).map(|_| rng.random_range(-2.0..2.0)).collect(),
            label: rng.random_range(0..2),
            timestamp_rank: k,
        })
        .collect();
    let batch: Vec<&InteractionRecord> = records.iter().collect();
    // one column masked out: its weights must get zero gradient both ways
    let mask = Genome::from_indices(FEATURES, [0, 1, 3, 4]);

    let mut blocks = Vec::new();
    for (arch, users, items) in [(Architecture::TwoTower, USERS, ITEMS), (Architecture::ContextOnly, 0, 0)] {
        let mut model = NeuralScorer::init(arch, users, items, mask.clone(), cfg)?;
        // random biases too, so every bias path is exercised
        for p in model.params_mut() {
            if *p == 0.0 {
                *p = rng.random_range(-0.5..0.5);
            }
        }
        let report = check_model(&model, &batch);
        let prefix = match arch {
            Architecture::TwoTower => "two_tower",
            Architecture::ContextOnly => "context_only",
        };
        blocks.extend(report.blocks.into_iter().map(|(n, e)| (format!("{prefix}/{n}"), e)));
    }
    Ok(GradientReport { blocks })
}
