//! Properties of the generator and the full model on the 10K-record
//! planted-signal dataset.

use ctxevo_core::dataset::{chronological_split, generate_synthetic, DatasetSplit, SynthSpec, SyntheticDataset};
use ctxevo_core::ensemble::LogisticModel;
use ctxevo_core::metrics::{auc, ScoredLabels};
use ctxevo_core::neuralscorer::{train, train_surrogate, ScorerConfig};
use ctxevo_core::{seed, Genome};
use rand::seq::index::sample;

fn planted(seed: u64) -> (SyntheticDataset, DatasetSplit) {
    let s = generate_synthetic(&SynthSpec::default(), seed).unwrap();
    let split = chronological_split(&s.dataset).unwrap();
    (s, split)
}

/// Validation AUC of a logistic model fitted on the train range over `columns`.
fn logistic_validation_auc(s: &SyntheticDataset, split: &DatasetSplit, columns: &[usize]) -> f64 {
    let rows = |r: std::ops::Range<usize>| -> Vec<Vec<f64>> {
        s.dataset.records()[r].iter().map(|rec| columns.iter().map(|&j| rec.context[j]).collect()).collect()
    };
    let m = LogisticModel::fit(&rows(split.train.clone()), &s.dataset.labels(split.train.clone()), 1.0).unwrap();
    let scores = rows(split.validation.clone()).iter().map(|x| m.predict(x)).collect();
    auc(&ScoredLabels::new(scores, s.dataset.labels(split.validation.clone())).unwrap()).unwrap()
}

#[test]
fn planted_columns_are_separable_and_noise_is_not() {
    for data_seed in [1, 2, 3] {
        let (s, split) = planted(data_seed);
        let good = logistic_validation_auc(&s, &split, &s.planted.columns);
        let mut rng = seed::rng(data_seed);
        let noise: Vec<usize> = (0..s.dataset.n_features()).filter(|j| !s.planted.columns.contains(j)).collect();
        let picked: Vec<usize> =
            sample(&mut rng, noise.len(), s.planted.columns.len()).into_iter().map(|i| noise[i]).collect();
        let bad = logistic_validation_auc(&s, &split, &picked);
        assert!(good >= 0.75, "seed {data_seed}: planted AUC {good}");
        assert!(bad <= 0.6, "seed {data_seed}: noise AUC {bad}");
    }
}

#[test]
fn full_model_training_loss_mostly_decreases() {
    let (s, split) = planted(1);
    let t = train(&s.dataset, &split, &s.planted.mask(200), &ScorerConfig::default()).unwrap();
    assert_eq!(t.history.len(), 20);
    let transitions = t.history.windows(2).count();
    let down = t.history.windows(2).filter(|w| w[1].train_loss <= w[0].train_loss).count();
    assert!(down as f64 >= 0.8 * transitions as f64, "{down}/{transitions}");
}

#[test]
fn surrogate_ranks_planted_mask_above_noise() {
    let (s, split) = planted(2);
    let sur = train_surrogate(&s.dataset, &split, &ScorerConfig::default()).unwrap();
    let score = |g: &Genome| {
        let p = ctxevo_core::neuralscorer::predict_masked(&sur, &s.dataset, g, split.validation.clone()).unwrap();
        auc(&p).unwrap()
    };
    let planted_mask = s.planted.mask(200);
    let noise = Genome::from_indices(200, (0..200).filter(|j| !planted_mask.get(*j)).take(8));
    assert!(score(&planted_mask) > score(&noise) + 0.1);
    // The empty context scores 0.5 everywhere.
    let zero =
        ctxevo_core::neuralscorer::predict_masked(&sur, &s.dataset, &Genome::zeros(200), split.test.clone()).unwrap();
    assert!(zero.scores().iter().all(|&p| p == 0.5));
}

#[test]
fn split_preserves_chronology() {
    let (s, split) = planted(4);
    let ranks: Vec<usize> = s.dataset.records().iter().map(|r| r.timestamp_rank).collect();
    assert!(ranks.windows(2).all(|w| w[0] < w[1]));
    assert_eq!((split.train.len(), split.validation.len(), split.test.len()), (7200, 800, 2000));
    assert_eq!(split.train.end, split.validation.start);
    assert_eq!(split.validation.end, split.test.start);
}
