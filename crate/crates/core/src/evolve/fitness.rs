//! Generation-relative fitness. Lower is better.

use super::{FitnessKind, FitnessWeights, Individual};

const GUARD: f64 = 1e-9;

/// Selection-pressure ramp `(1 - e^-x) / (1 - e^-1)`: 0 at 0, 1 at 1,
/// strictly increasing and concave.
pub fn phi(x: f64) -> f64 {
    (-(-x).exp_m1()) / (-(-1.0f64).exp_m1())
}

/// Per-generation normalizers: minimal AUC, maximal size and dimension count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalizers {
    pub auc_min: f64,
    pub size_max: usize,
    pub dim_max: usize,
}

impl Normalizers {
    pub fn of(pop: &[Individual]) -> Self {
        Normalizers {
            auc_min: pop.iter().map(|i| i.estimated_auc).fold(f64::INFINITY, f64::min),
            size_max: pop.iter().map(|i| i.size).max().unwrap_or(0),
            dim_max: pop.iter().map(|i| i.dims).max().unwrap_or(0),
        }
    }

    pub fn fitness(&self, ind: &Individual, w: &FitnessWeights, kind: FitnessKind) -> f64 {
        let auc_den = match 1.0 - self.auc_min {
            d if d > 0.0 => d,
            _ => GUARD,
        };
        let size_den = if self.size_max > 0 { self.size_max as f64 } else { GUARD };
        let mut f = w.auc * ((1.0 - ind.estimated_auc) / auc_den) + w.size * (ind.size as f64 / size_den);
        if kind == FitnessKind::Dim {
            let dim_den = if self.dim_max > 0 { self.dim_max as f64 } else { GUARD };
            f += w.dim * phi(ind.dims as f64 / dim_den);
        }
        f
    }
}

/// `W_auc (1 - AUC_i)/(1 - AUC_min) + W_size size_i / size_max`.
pub fn fitness_basic(pop: &mut [Individual], w: &FitnessWeights) {
    assign(pop, w, FitnessKind::Basic)
}

/// The basic terms plus `W_dim phi(dim_i / dim_max)`.
pub fn fitness_dimension(pop: &mut [Individual], w: &FitnessWeights) {
    assign(pop, w, FitnessKind::Dim)
}

pub fn assign(pop: &mut [Individual], w: &FitnessWeights, kind: FitnessKind) {
    let norm = Normalizers::of(pop);
    for ind in pop.iter_mut() {
        ind.fitness = norm.fitness(ind, w, kind);
    }
}
