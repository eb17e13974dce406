use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How candidate masks are scored during evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Heuristic {
    /// Train the context-only sub-network on the mask, report validation AUC.
    FullyTrained,
    /// Mask the inputs of a surrogate trained once on all features.
    PredictOnly,
}

impl std::str::FromStr for Heuristic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fully-trained" | "fully_trained" => Ok(Heuristic::FullyTrained),
            "predict-only" | "predict_only" => Ok(Heuristic::PredictOnly),
            other => Err(Error::Config(format!("unknown heuristic {other:?}"))),
        }
    }
}

/// Which fitness function ranks individuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitnessKind {
    /// AUC and size terms.
    Basic,
    /// AUC, size and the selection-pressure dimension term.
    #[serde(alias = "dimension")]
    Dim,
}

impl std::str::FromStr for FitnessKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(FitnessKind::Basic),
            "dim" | "dimension" => Ok(FitnessKind::Dim),
            other => Err(Error::Config(format!("unknown fitness {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitnessWeights {
    pub auc: f64,
    pub size: f64,
    #[serde(default)]
    pub dim: f64,
}

impl FitnessWeights {
    pub const BASIC: FitnessWeights = FitnessWeights { auc: 0.8, size: 0.2, dim: 0.0 };
    pub const EXTENDED: FitnessWeights = FitnessWeights { auc: 0.8, size: 0.15, dim: 0.05 };

    pub fn for_kind(kind: FitnessKind) -> Self {
        match kind {
            FitnessKind::Basic => FitnessWeights::BASIC,
            FitnessKind::Dim => FitnessWeights::EXTENDED,
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        FitnessWeights { auc: self.auc * c, size: self.size * c, dim: self.dim * c }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GAConfig {
    pub population_size: usize,
    pub generations: usize,
    pub tournament_k: usize,
    pub crossover_prob: f64,
    /// Probability that a crossover event uses the 5-point operator rather
    /// than the n-point one.
    pub five_point_prob: f64,
    pub bitflip_prob: f64,
    /// Mean active-bit count of initial genomes, as a fraction of `L`.
    pub init_mu_fraction: f64,
    /// Standard deviation of the initial active-bit count (absolute).
    pub init_sigma: f64,
    /// Upper bound for `n` in n-point crossover (also capped at `L - 1`).
    pub max_npoint: usize,
    pub fitness: FitnessKind,
    /// Overrides the weights implied by `fitness`.
    pub weights: Option<FitnessWeights>,
    pub heuristic: Heuristic,
    pub rng_seed: u64,
}

impl Default for GAConfig {
    fn default() -> Self {
        GAConfig {
            population_size: 100,
            generations: 300,
            tournament_k: 5,
            crossover_prob: 0.65,
            five_point_prob: 0.5,
            bitflip_prob: 0.025,
            init_mu_fraction: 0.25,
            init_sigma: 40.0,
            max_npoint: 20,
            fitness: FitnessKind::Basic,
            weights: None,
            heuristic: Heuristic::PredictOnly,
            rng_seed: 0,
        }
    }
}

impl GAConfig {
    pub fn weights(&self) -> FitnessWeights {
        self.weights.unwrap_or_else(|| FitnessWeights::for_kind(self.fitness))
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 || self.tournament_k == 0 {
            return Err(Error::Config("population_size and tournament_k must be positive".into()));
        }
        for (name, p) in [
            ("crossover_prob", self.crossover_prob),
            ("five_point_prob", self.five_point_prob),
            ("bitflip_prob", self.bitflip_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} = {p} is not a probability")));
            }
        }
        if !(self.init_sigma >= 0.0) || !(self.init_mu_fraction >= 0.0) || self.max_npoint == 0 {
            return Err(Error::Config("init_sigma, init_mu_fraction must be >= 0, max_npoint >= 1".into()));
        }
        let w = self.weights();
        if w.auc < 0.0 || w.size < 0.0 || w.dim < 0.0 || (w.auc + w.size + w.dim - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("fitness weights {w:?} must be >= 0 and sum to 1")));
        }
        if self.fitness == FitnessKind::Basic && w.dim != 0.0 {
            return Err(Error::Config("basic fitness has no dimension weight".into()));
        }
        Ok(())
    }
}
