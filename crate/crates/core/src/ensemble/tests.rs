use super::*;
use crate::dataset::{chronological_split, generate_synthetic, DatasetSplit, SynthSpec, SyntheticDataset};
use crate::evolve::{run_evolution, Evaluator, GAConfig};
use crate::genome::Genome;
use crate::metrics;
use crate::neuralscorer::{train, train_surrogate, ScorerConfig};
use crate::{exec, seed};

fn fixture() -> (SyntheticDataset, DatasetSplit, ScorerConfig) {
    let spec = SynthSpec {
        n_records: 1_500,
        n_dimensions: 4,
        features_per_dimension: vec![10],
        n_informative: 4,
        informative_dimensions: 2,
        ..SynthSpec::default()
    };
    let s = generate_synthetic(&spec, 11).unwrap();
    let split = chronological_split(&s.dataset).unwrap();
    let cfg = ScorerConfig { mlp_hidden: vec![16, 8], embedding_dim: 4, epochs_full: 3, ..ScorerConfig::default() };
    (s, split, cfg)
}

#[test]
fn identical_bases_reproduce_the_single_model_ranking() {
    let (s, split, cfg) = fixture();
    let mask = s.planted.mask(s.dataset.n_features());
    let (st, single) = {
        // Both bases trained with the same seed are the same network.
        let single = train(&s.dataset, &split, &mask, &cfg.with_seed(seed::derive(3, "ensemble/base", &[0]))).unwrap();
        let mut st = train_stack(&s.dataset, &split, std::slice::from_ref(&mask), &cfg, 1.0, 3).unwrap();
        st.bases.push(single.clone());
        let x = st.base_scores(&s.dataset, split.validation.clone()).unwrap();
        st.meta = LogisticModel::fit(&x, &s.dataset.labels(split.validation.clone()), 1.0).unwrap();
        (st, single)
    };
    assert_eq!(st.bases[0].model.params(), st.bases[1].model.params());
    let c = &st.meta.coefficients;
    assert!((c[0] - c[1]).abs() < 1e-9 * (1.0 + c[0].abs()), "{c:?}");
    let stacked = metrics::auc(&st.predict(&s.dataset, split.test.clone()).unwrap()).unwrap();
    let base = metrics::auc(&single.model.predict(&s.dataset, split.test.clone(), None).unwrap()).unwrap();
    // Equal positive weights make the stack a monotone map of one model.
    assert!(c[0] > 0.0);
    assert!((stacked - base).abs() < 1e-12, "{stacked} vs {base}");
}

#[test]
fn build_ensemble_bookkeeping_and_determinism() {
    let (s, split, cfg) = fixture();
    let sur = train_surrogate(&s.dataset, &split, &cfg).unwrap();
    let ev = Evaluator::predict_only(&s.dataset, &split, &sur);
    let ga = GAConfig { population_size: 16, generations: 8, init_sigma: 5.0, rng_seed: 2, ..GAConfig::default() };
    let r = run_evolution(&s.dataset, &split, &ga, &ev).unwrap();
    let ecfg = EnsembleConfig { max_representatives: 3, ..EnsembleConfig::default() };
    let a = exec::with_jobs(1, || build_ensemble(&s.dataset, &split, &r.archive, &cfg, &ecfg, 5).unwrap());
    let b = exec::with_jobs(3, || build_ensemble(&s.dataset, &split, &r.archive, &cfg, &ecfg, 5).unwrap());
    assert_eq!(a.report, b.report);
    let rep = &a.report;
    assert!((2..=3).contains(&rep.bases.len()));
    assert_eq!(rep.candidates, r.archive.len().min(ecfg.top_k_unique));
    assert_eq!(rep.meta.coefficients.len(), rep.bases.len());
    let union = a.representatives.iter().fold(Genome::zeros(40), |u, g| u.union(g));
    assert_eq!(rep.n_features, union.count_ones());
    assert!(rep.n_dimensions <= 4);
    for (g, b) in a.representatives.iter().zip(&rep.bases) {
        assert_eq!(g.to_hex(), b.genome);
        assert!(r.archive.contains(g));
    }
    assert!(rep.test_auc > 0.5 && rep.best_base_test_auc > 0.5);
    let scored = a.model.predict(&s.dataset, split.test.clone()).unwrap();
    assert!(scored.scores().iter().all(|&p| p > 0.0 && p < 1.0));
}

#[test]
fn config_validation() {
    assert!(EnsembleConfig::default().validate().is_ok());
    for bad in [
        EnsembleConfig { dbscan_eps: 0.0, ..Default::default() },
        EnsembleConfig { dbscan_eps: 1.0, ..Default::default() },
        EnsembleConfig { dbscan_min_pts: 0, ..Default::default() },
        EnsembleConfig { max_representatives: 1, ..Default::default() },
        EnsembleConfig { meta_l2: -1.0, ..Default::default() },
    ] {
        assert!(bad.validate().is_err(), "{bad:?}");
    }
}

#[test]
fn tiny_archive_is_rejected() {
    let (s, split, cfg) = fixture();
    let mut a = crate::evolve::EvaluationArchive::new();
    a.insert(Genome::ones(40), 0.7, 0);
    assert!(build_ensemble(&s.dataset, &split, &a, &cfg, &EnsembleConfig::default(), 0).is_err());
}
