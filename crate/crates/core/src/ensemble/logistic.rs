//! L2-regularized logistic regression fitted by damped Newton steps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neuralscorer::{bce_with_logit, sigmoid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
}

const MAX_ITER: usize = 100;
const TOL: f64 = 1e-10;

impl LogisticModel {
    pub fn logit(&self, x: &[f64]) -> f64 {
        self.intercept + self.coefficients.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        sigmoid(self.logit(x))
    }

    /// Minimizes `Σ logloss + λ/2 ‖w‖²` over rows `x` with labels `y`;
    /// the intercept is not penalized.
    pub fn fit(x: &[Vec<f64>], y: &[u8], l2: f64) -> Result<Self> {
        if x.is_empty() || x.len() != y.len() {
            return Err(Error::Shape(format!("{} rows for {} labels", x.len(), y.len())));
        }
        if !(l2 >= 0.0 && l2.is_finite()) {
            return Err(Error::Invalid(format!("L2 strength must be non-negative, got {l2}")));
        }
        let d = x[0].len();
        if x.iter().any(|r| r.len() != d) {
            return Err(Error::Shape("ragged design matrix".into()));
        }
        let p = d + 1;
        // theta[0] is the intercept.
        let mut theta = vec![0.0; p];
        let objective = |t: &[f64]| -> f64 {
            let m = Self::from_theta(t);
            let data: f64 = x.iter().zip(y).map(|(r, &yy)| bce_with_logit(m.logit(r), yy as f64)).sum();
            data + 0.5 * l2 * t[1..].iter().map(|w| w * w).sum::<f64>()
        };
        let mut current = objective(&theta);
        for _ in 0..MAX_ITER {
            let m = Self::from_theta(&theta);
            let mut grad = vec![0.0; p];
            let mut hess = vec![0.0; p * p];
            let mut row = vec![1.0; p];
            for (r, &yy) in x.iter().zip(y) {
                row[1..].copy_from_slice(r);
                let mu = sigmoid(m.logit(r));
                let w = mu * (1.0 - mu);
                for a in 0..p {
                    grad[a] += (mu - yy as f64) * row[a];
                    for b in 0..=a {
                        hess[a * p + b] += w * row[a] * row[b];
                    }
                }
            }
            for a in 1..p {
                grad[a] += l2 * theta[a];
                hess[a * p + a] += l2;
            }
            // Keeps the system solvable when predictions saturate.
            for a in 0..p {
                hess[a * p + a] += 1e-10;
            }
            let step = cholesky_solve(&mut hess, &grad, p)?;
            let mut scale = 1.0;
            let mut accepted = None;
            for _ in 0..40 {
                let cand: Vec<f64> = theta.iter().zip(&step).map(|(t, s)| t - scale * s).collect();
                let value = objective(&cand);
                if value <= current {
                    accepted = Some((cand, value));
                    break;
                }
                scale *= 0.5;
            }
            let Some((cand, value)) = accepted else { break };
            let moved = step.iter().map(|s| (scale * s).abs()).fold(0.0, f64::max);
            theta = cand;
            let improved = current - value;
            current = value;
            if moved < TOL || improved <= TOL * (1.0 + current.abs()) {
                break;
            }
        }
        Ok(Self::from_theta(&theta))
    }

    fn from_theta(t: &[f64]) -> Self {
        LogisticModel { intercept: t[0], coefficients: t[1..].to_vec() }
    }
}

/// Solves `A x = b` for symmetric positive-definite `A`, given by its lower
/// triangle (row-major, overwritten with the factor).
fn cholesky_solve(a: &mut [f64], b: &[f64], n: usize) -> Result<Vec<f64>> {
    for j in 0..n {
        let mut s = a[j * n + j];
        for k in 0..j {
            s -= a[j * n + k] * a[j * n + k];
        }
        if s <= 0.0 || !s.is_finite() {
            return Err(Error::Invalid("logistic Hessian is not positive definite".into()));
        }
        let l = s.sqrt();
        a[j * n + j] = l;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / l;
        }
    }
    let mut z = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            z[i] -= a[i * n + k] * z[k];
        }
        z[i] /= a[i * n + i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            z[i] -= a[k * n + i] * z[k];
        }
        z[i] /= a[i * n + i];
    }
    Ok(z)
}
