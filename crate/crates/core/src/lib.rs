//! Evolutionary selection of explicit contextual features for neural
//! context-aware recommenders.
//!
//! The pipeline has four stages:
//!
//! 1. [`dataset`]: chronologically ordered `(user, item, context, label)`
//!    interactions, a catalog grouping context columns into dimensions
//!    (sensors), and a synthetic generator with a planted informative set.
//! 2. [`neuralscorer`]: a two-path recommender (element-wise user/item
//!    product plus a concatenation MLP over user, item and masked context).
//! 3. [`evolve`]: a generational GA over bitstring masks, scored by one of
//!    two cheap AUC estimators, with size and dimension penalties.
//! 4. [`ensemble`]: density clustering of the evaluated masks, one full
//!    model per cluster representative, stacked by a logistic meta-learner.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dataset;
pub mod ensemble;
pub mod error;
pub mod evolve;
pub mod exec;
pub mod genome;
pub mod metrics;
pub mod neuralscorer;
pub mod seed;

pub use error::{Error, Result};
pub use genome::Genome;
