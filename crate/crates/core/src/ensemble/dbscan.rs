//! DBSCAN over genomes with Jaccard distance.
//!
//! Distances are computed on demand, so memory stays linear in the number
//! of genomes while time is quadratic.

use std::collections::VecDeque;

use super::jaccard::distance;
use crate::exec;
use crate::genome::Genome;

pub const NOISE: i64 = -1;

/// Neighbor counts within `eps`, each point counting itself.
pub fn neighbor_counts(genomes: &[Genome], eps: f64) -> Vec<usize> {
    exec::map(genomes, |i, g| count_row(genomes, i, g, eps))
}

/// Sequential reference for [`neighbor_counts`].
pub fn neighbor_counts_sequential(genomes: &[Genome], eps: f64) -> Vec<usize> {
    exec::map_sequential(genomes, |i, g| count_row(genomes, i, g, eps))
}

fn count_row(genomes: &[Genome], _i: usize, g: &Genome, eps: f64) -> usize {
    genomes.iter().filter(|h| distance(g, h) <= eps).count()
}

/// Cluster labels `0, 1, ...` in discovery order, [`NOISE`] for noise.
/// A point is core when at least `min_pts` points (itself included) lie
/// within `eps`. Border points join the first cluster that reaches them.
pub fn dbscan_cluster(genomes: &[Genome], eps: f64, min_pts: usize) -> Vec<i64> {
    let n = genomes.len();
    let core: Vec<bool> = neighbor_counts(genomes, eps).into_iter().map(|c| c >= min_pts).collect();
    let mut labels = vec![NOISE; n];
    let mut assigned = vec![false; n];
    let mut next = 0i64;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if assigned[start] || !core[start] {
            continue;
        }
        let cluster = next;
        next += 1;
        labels[start] = cluster;
        assigned[start] = true;
        queue.push_back(start);
        while let Some(p) = queue.pop_front() {
            for q in 0..n {
                if assigned[q] || distance(&genomes[p], &genomes[q]) > eps {
                    continue;
                }
                labels[q] = cluster;
                assigned[q] = true;
                if core[q] {
                    queue.push_back(q);
                }
            }
        }
    }
    labels
}
