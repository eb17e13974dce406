//! The context-aware neural recommender and its reduced variants.
//!
//! One parameterization serves three roles:
//!
//! * the full model: GMF path (`u ⊙ i`) plus an MLP over
//!   `[u, i, masked context]`, fused through dropout into a sigmoid output;
//! * the context-only MLP sub-network trained per candidate mask by the
//!   fully-trained heuristic;
//! * the bias-free context-only surrogate trained once on every feature and
//!   queried with masked inputs by the predict-only heuristic.

mod checkpoint;
mod config;
pub mod gradcheck;
mod model;
mod network;

pub use checkpoint::{CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use config::ScorerConfig;
pub use gradcheck::{gradient_check, GradientReport};
pub use model::{fit, predict_masked, train, train_context, train_surrogate, EpochStats, NeuralScorer, TrainedScorer};
pub use network::{bce_with_logit, sigmoid, Architecture, Block};
