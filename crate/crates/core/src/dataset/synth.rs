use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{chronological_split, FeatureCatalog, InteractionDataset, InteractionRecord};
use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::seed;

/// Parameters of the planted-signal generator.
///
/// Labels are `Bernoulli(sigmoid(a_u . b_i + beta * sum_{j in S} w_j c_j + eps))`
/// where `S` is the planted column set and `sum w_j^2 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSpec {
    pub n_users: usize,
    pub n_items: usize,
    pub n_records: usize,
    pub n_dimensions: usize,
    /// One entry per dimension, or a single entry applied to all.
    pub features_per_dimension: Vec<usize>,
    pub n_informative: usize,
    /// beta: scale of the planted context term.
    pub signal_strength: f64,
    /// rho: correlation between columns of the same dimension.
    pub noise_correlation: f64,
    /// Number of dimensions the planted columns are spread over.
    pub informative_dimensions: usize,
    /// Width of the latent user/item affinity vectors.
    pub latent_dim: usize,
    /// Standard deviation of the zero-mean part of each latent factor is
    /// chosen so the interaction term `a_u . b_i` has this standard deviation.
    pub affinity_scale: f64,
    /// Common mean of every latent factor; a nonzero mean gives users and
    /// items main effects that a context-free model can learn.
    pub latent_mean: f64,
    /// Standard deviation of `eps`.
    pub logit_noise: f64,
}

impl Default for SynthSpec {
    /// 10K records over 200 features in 10 dimensions, 8 planted, beta = 2.
    fn default() -> Self {
        SynthSpec {
            n_users: 100,
            n_items: 200,
            n_records: 10_000,
            n_dimensions: 10,
            features_per_dimension: vec![20],
            n_informative: 8,
            signal_strength: 2.0,
            noise_correlation: 0.2,
            informative_dimensions: 4,
            latent_dim: 4,
            affinity_scale: 1.0,
            latent_mean: 0.5,
            logit_noise: 0.1,
        }
    }
}

impl SynthSpec {
    pub fn dimension_sizes(&self) -> Result<Vec<usize>> {
        let sizes = match self.features_per_dimension.as_slice() {
            [n] => vec![*n; self.n_dimensions],
            list if list.len() == self.n_dimensions => list.to_vec(),
            list => {
                return Err(Error::Config(format!(
                    "features_per_dimension has {} entries for {} dimensions",
                    list.len(),
                    self.n_dimensions
                )))
            }
        };
        if sizes.contains(&0) {
            return Err(Error::Config("every dimension needs at least one feature".into()));
        }
        Ok(sizes)
    }

    pub fn total_features(&self) -> Result<usize> {
        Ok(self.dimension_sizes()?.iter().sum())
    }

    pub fn validate(&self) -> Result<()> {
        let l = self.total_features()?;
        if self.n_dimensions == 0 || self.n_users == 0 || self.n_items == 0 {
            return Err(Error::Config("need at least one dimension, user and item".into()));
        }
        if self.n_informative > l {
            return Err(Error::Config(format!(
                "n_informative = {} exceeds the {l} total features",
                self.n_informative
            )));
        }
        if !(self.signal_strength >= 0.0) || !self.signal_strength.is_finite() {
            return Err(Error::Config("signal_strength must be finite and >= 0".into()));
        }
        if !(0.0..1.0).contains(&self.noise_correlation) {
            return Err(Error::Config("noise_correlation must be in [0, 1)".into()));
        }
        if self.latent_dim == 0 || self.affinity_scale < 0.0 || self.logit_noise < 0.0 || !self.latent_mean.is_finite()
        {
            return Err(Error::Config("latent_dim must be >= 1, scales >= 0".into()));
        }
        Ok(())
    }
}

/// The planted informative columns, their dimensions and their weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedSet {
    pub columns: Vec<usize>,
    pub dimensions: Vec<usize>,
    pub weights: Vec<f64>,
}

impl PlantedSet {
    pub fn mask(&self, n_features: usize) -> Genome {
        Genome::from_indices(n_features, self.columns.iter().copied())
    }

    /// Planted columns selected by `genome`.
    pub fn recovered(&self, genome: &Genome) -> usize {
        self.columns.iter().filter(|&&c| genome.get(c)).count()
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticDataset {
    pub dataset: InteractionDataset,
    pub planted: PlantedSet,
}

/// Draws a dataset from `spec`. The result is standardized on the training
/// range of its chronological split, like a loaded file.
pub fn generate_synthetic(spec: &SynthSpec, seed: u64) -> Result<SyntheticDataset> {
    spec.validate()?;
    let sizes = spec.dimension_sizes()?;
    let catalog = FeatureCatalog::contiguous(&sizes)?;
    let l = catalog.total_features();

    let planted = plant(spec, &catalog, &mut seed::rng_for(seed, "synth/planted", &[]));

    let mut rng = seed::rng_for(seed, "synth/latent", &[]);
    // zero-mean parts ~ N(0, s^2) with latent_dim * s^4 = affinity^2
    let s = (spec.affinity_scale.powi(2) / spec.latent_dim as f64).powf(0.25);
    let mut latent = |n: usize| -> Vec<Vec<f64>> {
        (0..n).map(|_| (0..spec.latent_dim).map(|_| spec.latent_mean + s * normal(&mut rng)).collect()).collect()
    };
    let users = latent(spec.n_users);
    let items = latent(spec.n_items);

    let mut rng = seed::rng_for(seed, "synth/records", &[]);
    let shared = spec.noise_correlation.sqrt();
    let own = (1.0 - spec.noise_correlation).sqrt();
    let mut records = Vec::with_capacity(spec.n_records);
    for k in 0..spec.n_records {
        let user_id = rng.random_range(0..spec.n_users);
        let item_id = rng.random_range(0..spec.n_items);
        let mut context = vec![0.0; l];
        for dim in catalog.dimensions() {
            let z: f64 = normal(&mut rng);
            for &c in &dim.columns {
                context[c] = shared * z + own * normal(&mut rng);
            }
        }
        let affinity: f64 = users[user_id].iter().zip(&items[item_id]).map(|(a, b)| a * b).sum();
        let signal: f64 = planted.columns.iter().zip(&planted.weights).map(|(&c, &w)| w * context[c]).sum();
        let logit = affinity + spec.signal_strength * signal + spec.logit_noise * normal(&mut rng);
        let p = 1.0 / (1.0 + (-logit).exp());
        let label = u8::from(rng.random::<f64>() < p);
        records.push(InteractionRecord { user_id, item_id, context, label, timestamp_rank: k });
    }

    let mut dataset = InteractionDataset::new(records, catalog, spec.n_users, spec.n_items)?;
    if let Ok(split) = chronological_split(&dataset) {
        dataset.standardize(split.train);
    }
    Ok(SyntheticDataset { dataset, planted })
}

fn normal(rng: &mut impl Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Chooses the planted dimensions, then spreads the planted columns over
/// them round-robin. Dimensions that run out of columns are skipped, and
/// further dimensions are recruited if all chosen ones are full.
fn plant(spec: &SynthSpec, catalog: &FeatureCatalog, rng: &mut impl Rng) -> PlantedSet {
    let n_dims = catalog.n_dimensions();
    let mut dim_order: Vec<usize> = sample(rng, n_dims, n_dims).into_vec();
    let wanted = spec.informative_dimensions.clamp(1, n_dims);
    let mut active: Vec<usize> = dim_order.drain(..wanted).collect();

    // shuffled columns per dimension
    let mut pools: Vec<Vec<usize>> = catalog
        .dimensions()
        .iter()
        .map(|d| sample(rng, d.columns.len(), d.columns.len()).into_iter().map(|i| d.columns[i]).collect())
        .collect();

    let mut columns = Vec::with_capacity(spec.n_informative);
    let mut turn = 0;
    while columns.len() < spec.n_informative {
        if active.iter().all(|&d| pools[d].is_empty()) {
            active.push(dim_order.remove(0));
        }
        let d = active[turn % active.len()];
        turn += 1;
        if let Some(c) = pools[d].pop() {
            columns.push(c);
        }
    }
    columns.sort_unstable();

    let mut weights: Vec<f64> = columns
        .iter()
        .map(|_| {
            let magnitude = rng.random_range(0.5..1.5);
            if rng.random_bool(0.5) {
                magnitude
            } else {
                -magnitude
            }
        })
        .collect();
    let norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    if norm > 0.0 {
        weights.iter_mut().for_each(|w| *w /= norm);
    }

    let mut dimensions: Vec<usize> = columns.iter().map(|&c| catalog.dimension_of(c)).collect();
    dimensions.sort_unstable();
    dimensions.dedup();
    PlantedSet { columns, dimensions, weights }
}
