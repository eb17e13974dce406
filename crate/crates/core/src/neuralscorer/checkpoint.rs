//! Versioned JSON checkpoints. Floats are written in shortest round-trip
//! form, so save followed by load reproduces every parameter bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::model::{EpochStats, NeuralScorer, TrainedScorer};
use super::network::Architecture;
use super::ScorerConfig;
use crate::error::{Error, Result};
use crate::genome::Genome;

pub const CHECKPOINT_FORMAT: &str = "ctxevo-scorer";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    format: String,
    version: u32,
    architecture: Architecture,
    config: ScorerConfig,
    n_users: usize,
    n_items: usize,
    n_features: usize,
    mask: String,
    params: Vec<f64>,
    history: Vec<EpochStats>,
}

impl TrainedScorer {
    pub fn to_json(&self) -> Result<String> {
        let m = &self.model;
        let ck = Checkpoint {
            format: CHECKPOINT_FORMAT.into(),
            version: CHECKPOINT_VERSION,
            architecture: m.arch,
            config: m.config.clone(),
            n_users: m.n_users,
            n_items: m.n_items,
            n_features: m.n_features(),
            mask: m.mask.to_hex(),
            params: m.params.clone(),
            history: self.history.clone(),
        };
        serde_json::to_string(&ck).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ck: Checkpoint = serde_json::from_str(text).map_err(|e| Error::Parse(format!("checkpoint: {e}")))?;
        if ck.format != CHECKPOINT_FORMAT {
            return Err(Error::Parse(format!("not a scorer checkpoint (format {:?})", ck.format)));
        }
        if ck.version != CHECKPOINT_VERSION {
            return Err(Error::Parse(format!(
                "checkpoint version {} unsupported (expected {CHECKPOINT_VERSION})",
                ck.version
            )));
        }
        let mask = Genome::from_hex(&ck.mask, ck.n_features)?;
        let model = NeuralScorer::from_parts(ck.architecture, ck.config, ck.n_users, ck.n_items, mask, ck.params)?;
        Ok(TrainedScorer { model, history: ck.history })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        TrainedScorer::from_json(&text)
    }
}
