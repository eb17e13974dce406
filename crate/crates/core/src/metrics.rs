//! AUC and log loss.

use crate::error::{Error, Result};

/// Scores paired with binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredLabels {
    scores: Vec<f64>,
    labels: Vec<u8>,
}

impl ScoredLabels {
    pub fn new(scores: Vec<f64>, labels: Vec<u8>) -> Result<Self> {
        if scores.len() != labels.len() {
            return Err(Error::Shape(format!("{} scores but {} labels", scores.len(), labels.len())));
        }
        if scores.is_empty() {
            return Err(Error::Invalid("no scored instances".into()));
        }
        if let Some(k) = labels.iter().position(|&y| y > 1) {
            return Err(Error::Invalid(format!("non-binary label at index {k}")));
        }
        if let Some(k) = scores.iter().position(|s| s.is_nan()) {
            return Err(Error::Invalid(format!("NaN score at index {k}")));
        }
        Ok(ScoredLabels { scores, labels })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Area under the ROC curve, computed as the Mann-Whitney statistic from
/// rank sums. Tied scores share their average rank, which gives tied
/// positive/negative pairs half credit.
pub fn auc(sl: &ScoredLabels) -> Result<f64> {
    let n = sl.len();
    let positives = sl.labels.iter().filter(|&&y| y == 1).count();
    let negatives = n - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::AucUndefined);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sl.scores[a].total_cmp(&sl.scores[b]));

    // Sum of 1-based ranks of positives, ties averaged.
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && sl.scores[order[j]] == sl.scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + 1 + j) as f64 / 2.0;
        let pos_in_group = order[i..j].iter().filter(|&&k| sl.labels[k] == 1).count();
        rank_sum += avg_rank * pos_in_group as f64;
        i = j;
    }

    let p = positives as f64;
    let q = negatives as f64;
    let u = rank_sum - p * (p + 1.0) / 2.0;
    Ok(u / (p * q))
}

pub const LOG_LOSS_EPS: f64 = 1e-15;

/// Mean binary cross-entropy with probabilities clipped to
/// `[1e-15, 1 - 1e-15]`.
pub fn log_loss(sl: &ScoredLabels) -> f64 {
    let total: f64 = sl
        .scores
        .iter()
        .zip(&sl.labels)
        .map(|(&s, &y)| {
            let p = s.clamp(LOG_LOSS_EPS, 1.0 - LOG_LOSS_EPS);
            if y == 1 {
                -p.ln()
            } else {
                -(1.0 - p).ln()
            }
        })
        .sum();
    total / sl.len() as f64
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    /// O(n^2) pairwise count; the oracle for `auc`.
    pub(crate) fn brute_force_auc(scores: &[f64], labels: &[u8]) -> f64 {
        let mut credit = 0.0;
        let mut pairs = 0.0;
        for (i, &si) in scores.iter().enumerate() {
            if labels[i] != 1 {
                continue;
            }
            for (j, &sj) in scores.iter().enumerate() {
                if labels[j] != 0 {
                    continue;
                }
                pairs += 1.0;
                if si > sj {
                    credit += 1.0;
                } else if si == sj {
                    credit += 0.5;
                }
            }
        }
        credit / pairs
    }

    fn sl(scores: &[f64], labels: &[u8]) -> ScoredLabels {
        ScoredLabels::new(scores.to_vec(), labels.to_vec()).unwrap()
    }

    #[test]
    fn auc_examples() {
        assert_eq!(auc(&sl(&[0.9, 0.8, 0.3, 0.1], &[1, 1, 0, 0])).unwrap(), 1.0);
        assert_eq!(auc(&sl(&[0.1, 0.2, 0.8, 0.9], &[1, 1, 0, 0])).unwrap(), 0.0);
        let tied = sl(&[0.5, 0.5, 0.5, 0.2], &[1, 0, 1, 0]);
        assert_eq!(brute_force_auc(tied.scores(), tied.labels()), 0.75);
        assert_eq!(auc(&tied).unwrap(), 0.75);
    }

    #[test]
    fn auc_single_class_is_undefined() {
        assert!(matches!(auc(&sl(&[0.1, 0.2], &[1, 1])), Err(Error::AucUndefined)));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(ScoredLabels::new(vec![0.1], vec![1, 0]).is_err());
        assert!(ScoredLabels::new(vec![], vec![]).is_err());
        assert!(ScoredLabels::new(vec![0.1], vec![2]).is_err());
    }

    #[test]
    fn log_loss_examples() {
        assert!(log_loss(&sl(&[1.0], &[1])) < 1e-12);
        assert!((log_loss(&sl(&[0.5, 0.5], &[1, 0])) - std::f64::consts::LN_2).abs() < 1e-12);
        let clipped = log_loss(&sl(&[0.0], &[1]));
        assert!((clipped - (-(1e-15f64).ln())).abs() < 1e-9);
        assert!((clipped - 34.539).abs() < 1e-3);
    }

    #[test]
    fn rank_auc_matches_brute_force_with_ties() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 200 {
            let n = rng.random_range(2..=50);
            // coarse grid forces ties
            let scores: Vec<f64> = (0..n).map(|_| rng.random_range(0..10) as f64 / 10.0).collect();
            let labels: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
            let Ok(s) = ScoredLabels::new(scores.clone(), labels.clone()) else { continue };
            let Ok(fast) = auc(&s) else { continue };
            assert!((fast - brute_force_auc(&scores, &labels)).abs() < 1e-12);
            checked += 1;
        }
    }

    proptest! {
        #[test]
        fn negation_complements_without_ties(
            raw in proptest::collection::btree_set(0u32..100_000, 2..60),
            seed in any::<u64>(),
        ) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let scores: Vec<f64> = raw.iter().map(|&v| v as f64 / 100_000.0).collect();
            let mut labels: Vec<u8> = scores.iter().map(|_| rng.random_range(0..2)).collect();
            labels[0] = 0;
            labels[1] = 1;
            let a = auc(&sl(&scores, &labels)).unwrap();
            let neg: Vec<f64> = scores.iter().map(|s| -s).collect();
            let b = auc(&sl(&neg, &labels)).unwrap();
            prop_assert!((a + b - 1.0).abs() < 1e-12);
        }

        #[test]
        fn invariant_under_increasing_transform(
            scores in proptest::collection::vec(0.0f64..1.0, 4..50),
            labels in proptest::collection::vec(0u8..2, 4..50),
        ) {
            let n = scores.len().min(labels.len());
            let (scores, mut labels) = (scores[..n].to_vec(), labels[..n].to_vec());
            labels[0] = 0;
            labels[1] = 1;
            let a = auc(&sl(&scores, &labels)).unwrap();
            let t: Vec<f64> = scores.iter().map(|s| (3.0 * s).exp() + 2.0).collect();
            prop_assert!((a - auc(&sl(&t, &labels)).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn log_loss_permutation_invariant(
            pairs in proptest::collection::vec((0.0f64..1.0, 0u8..2), 1..40),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut shuffled = pairs.clone();
            shuffled.shuffle(&mut rng);
            let unzip = |v: &[(f64, u8)]| {
                let (s, l): (Vec<f64>, Vec<u8>) = v.iter().cloned().unzip();
                ScoredLabels::new(s, l).unwrap()
            };
            let a = log_loss(&unzip(&pairs));
            let b = log_loss(&unzip(&shuffled));
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }
    }
}
