//! Interaction data model, chronological splitting, ingestion and the
//! synthetic planted-signal generator.

mod catalog;
mod io;
mod synth;

use std::ops::Range;

pub use catalog::{Dimension, FeatureCatalog};
pub use io::{load_csv, write_catalog, write_csv};
pub use synth::{generate_synthetic, PlantedSet, SynthSpec, SyntheticDataset};

use crate::error::{Error, Result};

/// One interaction event `(user, item, context, label)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionRecord {
    pub user_id: usize,
    pub item_id: usize,
    pub context: Vec<f64>,
    pub label: u8,
    pub timestamp_rank: usize,
}

/// Chronologically ordered interactions plus the feature catalog.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionDataset {
    records: Vec<InteractionRecord>,
    catalog: FeatureCatalog,
    n_users: usize,
    n_items: usize,
}

impl InteractionDataset {
    /// Validates every record against the catalog and the id bounds.
    pub fn new(
        records: Vec<InteractionRecord>,
        catalog: FeatureCatalog,
        n_users: usize,
        n_items: usize,
    ) -> Result<Self> {
        let l = catalog.total_features();
        let mut last_rank = 0;
        for (k, r) in records.iter().enumerate() {
            if r.label > 1 {
                return Err(Error::Dataset(format!("non-binary label at row {k}")));
            }
            if r.context.len() != l {
                return Err(Error::Dataset(format!(
                    "row {k} has {} context values, catalog has {l} features",
                    r.context.len()
                )));
            }
            if r.user_id >= n_users || r.item_id >= n_items {
                return Err(Error::Dataset(format!(
                    "row {k}: user {} / item {} outside {n_users} users / {n_items} items",
                    r.user_id, r.item_id
                )));
            }
            if r.timestamp_rank < last_rank {
                return Err(Error::Dataset(format!("row {k} is out of chronological order")));
            }
            last_rank = r.timestamp_rank;
        }
        Ok(InteractionDataset { records, catalog, n_users, n_items })
    }

    pub fn records(&self) -> &[InteractionRecord] {
        &self.records
    }

    pub fn catalog(&self) -> &FeatureCatalog {
        &self.catalog
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    /// Record count `N`.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Context feature count `L`.
    pub fn n_features(&self) -> usize {
        self.catalog.total_features()
    }

    pub fn labels(&self, range: Range<usize>) -> Vec<u8> {
        self.records[range].iter().map(|r| r.label).collect()
    }

    /// Standardizes every context column to zero mean and unit variance
    /// using statistics of `fit_range` only, applied to all records.
    /// Constant columns become all-zero.
    pub fn standardize(&mut self, fit_range: Range<usize>) {
        let l = self.n_features();
        let n = fit_range.len() as f64;
        if fit_range.is_empty() {
            return;
        }
        let mut mean = vec![0.0; l];
        for r in &self.records[fit_range.clone()] {
            for (m, &x) in mean.iter_mut().zip(&r.context) {
                *m += x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; l];
        for r in &self.records[fit_range] {
            for ((v, &x), &m) in var.iter_mut().zip(&r.context).zip(&mean) {
                *v += (x - m) * (x - m);
            }
        }
        let scale: Vec<f64> = var
            .iter()
            .map(|&v| {
                let sd = (v / n).sqrt();
                if sd > 1e-12 {
                    1.0 / sd
                } else {
                    0.0
                }
            })
            .collect();
        for r in &mut self.records {
            for ((x, &m), &s) in r.context.iter_mut().zip(&mean).zip(&scale) {
                *x = (*x - m) * s;
            }
        }
    }
}

/// Contiguous chronological train / validation / test ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSplit {
    pub train: Range<usize>,
    pub validation: Range<usize>,
    pub test: Range<usize>,
}

impl DatasetSplit {
    /// Split sizes for `n` records: the last `round(0.2 n)` are test, the
    /// last `round(0.1 (n - test))` of the rest are validation. Rounding is
    /// half-up.
    pub fn for_len(n: usize) -> Result<Self> {
        if n < 10 {
            return Err(Error::TooSmall(n));
        }
        // round(x / 10) half-up == (x + 5) / 10 for integer x
        let test = (2 * n + 5) / 10;
        let rest = n - test;
        let validation = (rest + 5) / 10;
        let train = rest - validation;
        Ok(DatasetSplit { train: 0..train, validation: train..rest, test: rest..n })
    }

    /// Train and validation together, for the final refit.
    pub fn train_and_validation(&self) -> Range<usize> {
        self.train.start..self.validation.end
    }
}

pub fn chronological_split(ds: &InteractionDataset) -> Result<DatasetSplit> {
    DatasetSplit::for_len(ds.len())
}
