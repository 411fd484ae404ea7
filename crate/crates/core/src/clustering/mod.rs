//! Clustering backends over a precomputed distance matrix.
//!
//! All methods return a [`ClusteringResult`] in canonical form: medoid
//! indices sorted ascending, cluster ids assigned in that order, and every
//! item labeled with its nearest medoid (ties to the lowest cluster id).

mod affinity;
mod brute;
mod hierarchical;
mod kmedoids;

pub use affinity::{affinity_propagation, APConfig};
pub use brute::brute_force_kmedoids;
pub use hierarchical::hierarchical;
pub use kmedoids::kmedoids;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::numeric::pairwise_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClusteringMethod {
    #[serde(rename = "kmedoids")]
    KMedoids,
    #[serde(rename = "hierarchical")]
    Hierarchical,
    #[serde(rename = "affinity_propagation")]
    AffinityPropagation,
}

impl std::fmt::Display for ClusteringMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ClusteringMethod::KMedoids => "kmedoids",
            ClusteringMethod::Hierarchical => "hierarchical",
            ClusteringMethod::AffinityPropagation => "affinity_propagation",
        };
        f.write_str(name)
    }
}

/// Per-item cluster labels plus one representative (medoid) index per cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusteringResult {
    method: ClusteringMethod,
    labels: Vec<usize>,
    medoids: Vec<usize>,
    converged: bool,
}

impl ClusteringResult {
    /// Assembles a result in canonical form from a set of medoid indices:
    /// medoids are sorted, deduplicated, and every item is assigned to its
    /// nearest medoid (ties to the lowest cluster id).
    pub(crate) fn from_medoids(
        d: &DistanceMatrix,
        mut medoids: Vec<usize>,
        method: ClusteringMethod,
        converged: bool,
    ) -> Self {
        medoids.sort_unstable();
        medoids.dedup();
        let labels = assign_nearest(d, &medoids);
        ClusteringResult {
            method,
            labels,
            medoids,
            converged,
        }
    }

    /// Assembles a result from an explicit partition, keeping the given
    /// membership but renumbering clusters so medoid indices come out
    /// ascending.
    pub(crate) fn from_labeled(
        labels: Vec<usize>,
        medoids: Vec<usize>,
        method: ClusteringMethod,
        converged: bool,
    ) -> Self {
        let k = medoids.len();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_unstable_by_key(|&c| medoids[c]);
        let mut remap = vec![0usize; k];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        ClusteringResult {
            method,
            labels: labels.into_iter().map(|l| remap[l]).collect(),
            medoids: order.into_iter().map(|c| medoids[c]).collect(),
            converged,
        }
    }

    pub fn method(&self) -> ClusteringMethod {
        self.method
    }

    pub fn k(&self) -> usize {
        self.medoids.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Medoid dataset index for each cluster id.
    pub fn medoids(&self) -> &[usize] {
        &self.medoids
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Total distance of every item to its cluster medoid.
    pub fn inertia(&self, d: &DistanceMatrix) -> Result<f64> {
        if self.labels.len() != d.n() {
            return Err(Error::SizeMismatch {
                expected: d.n(),
                actual: self.labels.len(),
            });
        }
        let dists: Vec<f64> = self
            .labels
            .iter()
            .enumerate()
            .map(|(i, &c)| d.get(i, self.medoids[c]))
            .collect();
        Ok(pairwise_sum(&dists))
    }

    /// Serializes as a JSON object with an explicit inertia value.
    pub fn to_json(&self, inertia: f64) -> serde_json::Value {
        let medoids: serde_json::Map<String, serde_json::Value> = self
            .medoids
            .iter()
            .enumerate()
            .map(|(c, &m)| (c.to_string(), serde_json::Value::from(m)))
            .collect();
        serde_json::json!({
            "method": self.method.to_string(),
            "k": self.k(),
            "labels": self.labels,
            "medoids": medoids,
            "inertia": inertia,
            "converged": self.converged,
        })
    }
}

/// Nearest-medoid labels; ties go to the lowest cluster id.
pub(crate) fn assign_nearest(d: &DistanceMatrix, medoids: &[usize]) -> Vec<usize> {
    (0..d.n())
        .map(|i| {
            let mut best = 0;
            let mut best_d = d.get(i, medoids[0]);
            for (c, &m) in medoids.iter().enumerate().skip(1) {
                let dm = d.get(i, m);
                if dm < best_d {
                    best = c;
                    best_d = dm;
                }
            }
            best
        })
        .collect()
}

/// Inertia of an explicit medoid set under nearest assignment.
pub(crate) fn medoid_set_inertia(d: &DistanceMatrix, medoids: &[usize]) -> f64 {
    let dists: Vec<f64> = (0..d.n())
        .map(|i| {
            medoids
                .iter()
                .map(|&m| d.get(i, m))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    pairwise_sum(&dists)
}

/// Medoid of an index set: the member minimizing summed distance to the
/// others, ties to the lowest index.
pub(crate) fn medoid_of_members(d: &DistanceMatrix, members: &[usize]) -> usize {
    let mut best = members[0];
    let mut best_sum = f64::INFINITY;
    for &i in members {
        let mut sum = 0.0;
        for &j in members {
            sum += d.get(i, j);
        }
        if sum < best_sum {
            best = i;
            best_sum = sum;
        }
    }
    best
}

pub(crate) fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::InvalidK { k, n })
    } else {
        Ok(())
    }
}

#[cfg(test)]
pub(crate) fn validate_result(r: &ClusteringResult, n: usize) {
    assert_eq!(r.labels().len(), n);
    assert!(r.k() >= 1 && r.k() <= n);
    for w in r.medoids().windows(2) {
        assert!(w[0] < w[1], "medoids not sorted/unique");
    }
    for (c, &m) in r.medoids().iter().enumerate() {
        assert_eq!(r.labels()[m], c, "medoid {m} not labeled with cluster {c}");
    }
    for &l in r.labels() {
        assert!(l < r.k(), "label out of range");
    }
}
