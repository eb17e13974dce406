//! Diverse-subset stacking over the evaluation archive.
//!
//! The top archived masks are clustered by Jaccard distance, the best mask
//! of each cluster trains a full model, and a logistic meta-learner combines
//! their validation predictions.

mod dbscan;
mod jaccard;
mod logistic;
mod select;
mod stack;

pub use dbscan::{dbscan_cluster, neighbor_counts, neighbor_counts_sequential, NOISE};
pub use jaccard::jaccard_similarity;
pub use logistic::LogisticModel;
pub use select::{pick_representatives, select_top_unique, FALLBACK_MAX_SIMILARITY};
pub use stack::{build_ensemble, train_stack, BaseReport, EnsembleReport, EnsembleResult, StackedModel};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleConfig {
    pub top_k_unique: usize,
    pub dbscan_eps: f64,
    pub dbscan_min_pts: usize,
    pub max_representatives: usize,
    /// L2 strength of the meta-learner.
    pub meta_l2: f64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig { top_k_unique: 5000, dbscan_eps: 0.3, dbscan_min_pts: 5, max_representatives: 10, meta_l2: 1.0 }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dbscan_eps > 0.0 && self.dbscan_eps < 1.0) {
            return Err(Error::Config(format!("dbscan_eps = {} must lie in (0, 1)", self.dbscan_eps)));
        }
        if self.dbscan_min_pts == 0 || self.top_k_unique == 0 {
            return Err(Error::Config("dbscan_min_pts and top_k_unique must be positive".into()));
        }
        if self.max_representatives < 2 {
            return Err(Error::Config("max_representatives must be at least 2".into()));
        }
        if !(self.meta_l2 >= 0.0 && self.meta_l2.is_finite()) {
            return Err(Error::Config(format!("meta_l2 = {} must be non-negative", self.meta_l2)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
