use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hyper-parameters of the scorer networks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScorerConfig {
    pub embedding_dim: usize,
    pub batch_size: usize,
    /// Dropout on the fused GMF/MLP vector, training mode only.
    pub dropout_rate: f64,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub mlp_hidden: Vec<usize>,
    pub epochs_full: usize,
    pub epochs_heuristic: usize,
    pub use_bias: bool,
    pub rng_seed: u64,
}

impl Default for ScorerConfig {
    fn default() -> Self {
        ScorerConfig {
            embedding_dim: 16,
            batch_size: 256,
            dropout_rate: 0.5,
            learning_rate: 0.001,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            mlp_hidden: vec![64, 32, 16],
            epochs_full: 20,
            epochs_heuristic: 3,
            use_bias: true,
            rng_seed: 0,
        }
    }
}

impl ScorerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.embedding_dim == 0 || self.batch_size == 0 {
            return Err(Error::Config("embedding_dim and batch_size must be positive".into()));
        }
        if self.mlp_hidden.is_empty() || self.mlp_hidden.contains(&0) {
            return Err(Error::Config("mlp_hidden needs at least one positive width".into()));
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return Err(Error::Config("dropout_rate must be in [0, 1)".into()));
        }
        if !(self.learning_rate > 0.0)
            || !(0.0..1.0).contains(&self.beta1)
            || !(0.0..1.0).contains(&self.beta2)
            || !(self.epsilon > 0.0)
        {
            return Err(Error::Config("invalid Adam parameters".into()));
        }
        Ok(())
    }

    pub fn with_seed(&self, rng_seed: u64) -> Self {
        ScorerConfig { rng_seed, ..self.clone() }
    }
}
