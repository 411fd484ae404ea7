//! Agglomerative clustering with complete linkage.

use crate::error::Result;
use crate::matrix::DistanceMatrix;

use super::{check_k, medoid_of_members, ClusteringMethod, ClusteringResult};

/// Merges singletons bottom-up, always joining the two clusters whose
/// maximum inter-cluster distance is smallest, until `k` clusters remain.
/// Ties pick the lexicographically smallest pair of cluster ids, where a
/// cluster's id is its smallest member index. Each final cluster is
/// represented by its medoid.
pub fn hierarchical(d: &DistanceMatrix, k: usize) -> Result<ClusteringResult> {
    let n = d.n();
    check_k(k, n)?;

    // link[a][b] holds the complete-linkage distance between the active
    // clusters rooted at items a and b
    let mut link: Vec<f64> = d.entries().to_vec();
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut active: Vec<usize> = (0..n).collect();

    while active.len() > k {
        let mut best = (active[0], active[1]);
        let mut best_d = f64::INFINITY;
        for (ai, &a) in active.iter().enumerate() {
            for &b in &active[ai + 1..] {
                let dist = link[a * n + b];
                if dist < best_d {
                    best_d = dist;
                    best = (a, b);
                }
            }
        }
        let (a, b) = best;
        // merge b into a; a < b, so the union keeps its smallest member as id
        let moved = std::mem::take(&mut members[b]);
        members[a].extend(moved);
        active.retain(|&c| c != b);
        for &c in &active {
            if c == a {
                continue;
            }
            let merged = link[a * n + c].max(link[b * n + c]);
            link[a * n + c] = merged;
            link[c * n + a] = merged;
        }
    }

    let mut labels = vec![0usize; n];
    let mut medoids = Vec::with_capacity(k);
    for (cluster, &root) in active.iter().enumerate() {
        let mut group = members[root].clone();
        group.sort_unstable();
        for &i in &group {
            labels[i] = cluster;
        }
        medoids.push(medoid_of_members(d, &group));
    }
    Ok(ClusteringResult::from_labeled(
        labels,
        medoids,
        ClusteringMethod::Hierarchical,
        true,
    ))
}
