use std::cmp::Ordering;

use super::dbscan::NOISE;
use super::jaccard::distance;
use crate::error::{Error, Result};
use crate::evolve::EvaluationArchive;
use crate::genome::Genome;

/// Cutoff used when clustering yields fewer than two clusters: a genome is
/// added only if its similarity to every pick stays below this.
pub const FALLBACK_MAX_SIMILARITY: f64 = 0.7;

/// The `k` archived genomes with the highest estimated AUC; ties go to the
/// earlier generation, then to the lexicographically smaller genome.
pub fn select_top_unique(archive: &EvaluationArchive, k: usize) -> Vec<Genome> {
    let mut all: Vec<_> = archive.iter().collect();
    all.sort_by(|(ga, a), (gb, b)| {
        b.estimated_auc
            .partial_cmp(&a.estimated_auc)
            .unwrap_or(Ordering::Equal)
            .then(a.first_seen_generation.cmp(&b.first_seen_generation))
            .then_with(|| ga.cmp(gb))
    });
    all.into_iter().take(k).map(|(g, _)| g.clone()).collect()
}

/// One genome per cluster: the member with the highest estimated AUC.
/// Clusters are ranked by that AUC and at most `max_reps` are kept.
///
/// `genomes` must be ordered as by [`select_top_unique`], so the first
/// member of each cluster is its best. With fewer than two clusters a
/// greedy pass over `genomes` picks diverse high-AUC genomes instead.
pub fn pick_representatives(genomes: &[Genome], labels: &[i64], max_reps: usize) -> Result<Vec<Genome>> {
    if genomes.is_empty() || genomes.len() != labels.len() {
        return Err(Error::Invalid(format!(
            "representatives need a non-empty genome list with one label each ({} genomes, {} labels)",
            genomes.len(),
            labels.len()
        )));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut reps: Vec<Genome> = Vec::new();
    for (g, &l) in genomes.iter().zip(labels) {
        if l != NOISE && seen.insert(l) {
            reps.push(g.clone());
        }
    }
    if reps.len() >= 2 {
        reps.truncate(max_reps);
        return Ok(reps);
    }
    // Greedy diverse selection, seeded with the single cluster's best if any.
    for g in genomes {
        if reps.len() >= max_reps {
            break;
        }
        if reps.iter().all(|r| 1.0 - distance(r, g) < FALLBACK_MAX_SIMILARITY) {
            reps.push(g.clone());
        }
    }
    // Near-duplicate archives: settle for the best distinct genomes.
    for g in genomes {
        if reps.len() >= 2.min(max_reps) {
            break;
        }
        if !reps.contains(g) {
            reps.push(g.clone());
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn archive(rows: &[(&str, f64, usize)]) -> EvaluationArchive {
        let mut a = EvaluationArchive::new();
        for &(bits, auc, gen) in rows {
            a.insert(Genome::parse_bits(bits).unwrap(), auc, gen);
        }
        a
    }

    #[test]
    fn top_unique_ordering() {
        let a = archive(&[("0011", 0.7, 2), ("1000", 0.8, 3), ("0100", 0.7, 1), ("0010", 0.7, 1)]);
        let top: Vec<String> = select_top_unique(&a, 10).iter().map(|g| g.to_string()).collect();
        assert_eq!(top, ["1000", "0010", "0100", "0011"]);
        assert_eq!(select_top_unique(&a, 2).len(), 2);
    }

    #[test]
    fn one_per_cluster_in_rank_order() {
        let g: Vec<Genome> =
            ["1100", "1110", "0011", "0001", "1001"].iter().map(|s| Genome::parse_bits(s).unwrap()).collect();
        let reps = pick_representatives(&g, &[0, 0, 1, 1, NOISE], 10).unwrap();
        assert_eq!(reps, vec![g[0].clone(), g[2].clone()]);
        assert_eq!(pick_representatives(&g, &[0, 1, 2, 3, 4], 2).unwrap().len(), 2);
    }

    #[test]
    fn fallback_prefers_dissimilar_genomes() {
        let g: Vec<Genome> =
            ["11110000", "11110001", "00001111", "11100000"].iter().map(|s| Genome::parse_bits(s).unwrap()).collect();
        let reps = pick_representatives(&g, &[0, 0, NOISE, 0], 10).unwrap();
        assert_eq!(reps, vec![g[0].clone(), g[2].clone()]);
        let all_noise = pick_representatives(&g, &[NOISE; 4], 10).unwrap();
        assert_eq!(all_noise, vec![g[0].clone(), g[2].clone()]);
    }

    #[test]
    fn fallback_reaches_two_on_near_duplicates() {
        let g: Vec<Genome> = ["11111110", "11111111"].iter().map(|s| Genome::parse_bits(s).unwrap()).collect();
        assert_eq!(pick_representatives(&g, &[0, 0], 10).unwrap().len(), 2);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(pick_representatives(&[], &[], 5).is_err());
    }

    #[test]
    fn representatives_are_distinct_cluster_bests() {
        use crate::ensemble::dbscan::{dbscan_cluster, tests::clustered_genomes};
        use crate::seed;
        use rand::Rng;
        let mut rng = seed::rng(31);
        for _ in 0..30 {
            let mut a = EvaluationArchive::new();
            for g in clustered_genomes(&mut rng, 50, 30) {
                let auc = rng.random_range(0.5..0.9);
                a.insert(g, auc, 0);
            }
            let top = select_top_unique(&a, 5000);
            let labels = dbscan_cluster(&top, 0.3, 3);
            let reps = pick_representatives(&top, &labels, 10).unwrap();
            assert!(reps.len() >= 2.min(top.len()));
            for (i, r) in reps.iter().enumerate() {
                assert!(reps[..i].iter().all(|q| q != r));
            }
            let clusters: std::collections::BTreeSet<i64> = labels.iter().copied().filter(|&l| l != NOISE).collect();
            if clusters.len() >= 2 {
                let mut prev = f64::INFINITY;
                for r in &reps {
                    let l = labels[top.iter().position(|g| g == r).unwrap()];
                    let best = top
                        .iter()
                        .zip(&labels)
                        .filter(|(_, &m)| m == l)
                        .map(|(g, _)| a.get(g).unwrap().estimated_auc)
                        .fold(f64::NEG_INFINITY, f64::max);
                    let auc = a.get(r).unwrap().estimated_auc;
                    assert_eq!(auc, best);
                    assert!(auc <= prev);
                    prev = auc;
                }
            }
        }
    }
}
