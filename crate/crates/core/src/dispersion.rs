//! Dispersion score, cluster-number sweeps, and elbow detection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{
    affinity_propagation, hierarchical, kmedoids, APConfig, ClusteringMethod, ClusteringResult,
};
use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;

/// Odd 64-bit constant for deriving independent per-k seeds inside a sweep.
const SWEEP_SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

/// Clustering backend selection for dispersion evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    KMedoids,
    Hierarchical,
    AffinityPropagation(APConfig),
}

impl Method {
    pub fn name(&self) -> ClusteringMethod {
        match self {
            Method::KMedoids => ClusteringMethod::KMedoids,
            Method::Hierarchical => ClusteringMethod::Hierarchical,
            Method::AffinityPropagation(_) => ClusteringMethod::AffinityPropagation,
        }
    }
}

/// A single dispersion measurement: inertia of one clustering divided by the
/// number of items.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionReport {
    pub n_items: usize,
    pub k: usize,
    pub inertia: f64,
    pub score: f64,
    pub method: ClusteringMethod,
}

/// Dispersion score as a function of cluster number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCurve {
    pub ks: Vec<usize>,
    pub scores: Vec<f64>,
    pub method: ClusteringMethod,
    pub seed: u64,
}

impl SweepCurve {
    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }
}

/// Detected elbow of a sweep curve plus the per-point normalized distances
/// it was derived from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElbowReport {
    pub elbow_k: usize,
    pub normalized_distance: Vec<f64>,
    pub curve: SweepCurve,
}

/// Sum of each item's distance to its cluster medoid.
pub fn inertia(d: &DistanceMatrix, c: &ClusteringResult) -> Result<f64> {
    c.inertia(d)
}

/// Clusters the matrix and reports inertia / N. For affinity propagation the
/// requested `k` is ignored; the emergent cluster count is reported instead.
pub fn dispersion_score(
    d: &DistanceMatrix,
    k: usize,
    method: Method,
    seed: u64,
) -> Result<DispersionReport> {
    let result = match method {
        Method::KMedoids => kmedoids(d, k, seed)?,
        Method::Hierarchical => hierarchical(d, k)?,
        Method::AffinityPropagation(cfg) => affinity_propagation(d, &cfg, seed)?,
    };
    report_from(d, &result)
}

/// Builds a report from an existing clustering of `d`.
pub fn report_from(d: &DistanceMatrix, result: &ClusteringResult) -> Result<DispersionReport> {
    let inertia = result.inertia(d)?;
    Ok(DispersionReport {
        n_items: d.n(),
        k: result.k(),
        inertia,
        score: inertia / d.n() as f64,
        method: result.method(),
    })
}

/// Seed used for the k-point of a sweep started with `seed`.
pub fn sweep_seed(seed: u64, k: usize) -> u64 {
    seed ^ SWEEP_SEED_MIX.wrapping_mul(k as u64)
}

/// Evaluates the dispersion score at each cluster count in `ks`.
///
/// Every k gets an independent seed derived from `seed`, so the curve is
/// reproducible and insensitive to evaluation order; points may be computed
/// in parallel. All `ks` are validated before any clustering happens.
pub fn sweep(d: &DistanceMatrix, ks: &[usize], method: Method, seed: u64) -> Result<SweepCurve> {
    if matches!(method, Method::AffinityPropagation(_)) {
        return Err(Error::InvalidSpec(
            "sweep is undefined for affinity propagation; its cluster count is emergent".into(),
        ));
    }
    if ks.is_empty() {
        return Err(Error::InvalidSpec("empty sweep range".into()));
    }
    for w in ks.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidSpec(format!(
                "sweep ks must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    for &k in ks {
        if k == 0 || k > d.n() {
            return Err(Error::InvalidK { k, n: d.n() });
        }
    }
    let scores: Vec<f64> = ks
        .par_iter()
        .map(|&k| dispersion_score(d, k, method, sweep_seed(seed, k)).map(|r| r.score))
        .collect::<Result<_>>()?;
    Ok(SweepCurve {
        ks: ks.to_vec(),
        scores,
        method: method.name(),
        seed,
    })
}

/// Finds the elbow of a decreasing curve as the point of maximum normalized
/// distance below the descending diagonal.
///
/// Cluster counts and scores are min-max normalized to [0, 1]; the
/// normalized distance of point i is `1 - x_i - y_i` and the elbow is the k
/// maximizing it, ties to the smallest k. A constant curve, or one that
/// never dips below the diagonal, has no elbow.
pub fn kneedle_elbow(curve: &SweepCurve) -> Result<ElbowReport> {
    let n = curve.len();
    if n < 3 {
        return Err(Error::InvalidSpec(format!(
            "kneedle needs at least 3 sweep points, got {n}"
        )));
    }
    let k_min = curve.ks[0] as f64;
    let k_max = curve.ks[n - 1] as f64;
    let (s_min, s_max) = curve
        .scores
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| {
            (lo.min(s), hi.max(s))
        });
    if s_min == s_max {
        return Err(Error::NoElbow);
    }
    let delta: Vec<f64> = curve
        .ks
        .iter()
        .zip(&curve.scores)
        .map(|(&k, &s)| {
            let x = (k as f64 - k_min) / (k_max - k_min);
            let y = (s - s_min) / (s_max - s_min);
            1.0 - x - y
        })
        .collect();
    let mut best = 0usize;
    for (i, &v) in delta.iter().enumerate().skip(1) {
        if v > delta[best] {
            best = i;
        }
    }
    if delta[best] <= 0.0 {
        return Err(Error::NoElbow);
    }
    Ok(ElbowReport {
        elbow_k: curve.ks[best],
        normalized_distance: delta,
        curve: curve.clone(),
    })
}

/// Sweeps, finds the elbow, and evaluates the score at the elbow's k.
///
/// With affinity propagation there is nothing to sweep: the single emergent
/// report is returned without an elbow.
pub fn auto_ds(
    d: &DistanceMatrix,
    ks: &[usize],
    method: Method,
    seed: u64,
) -> Result<(Option<ElbowReport>, DispersionReport)> {
    if let Method::AffinityPropagation(_) = method {
        let report = dispersion_score(d, 1, method, seed)?;
        return Ok((None, report));
    }
    let curve = sweep(d, ks, method, seed)?;
    let elbow = kneedle_elbow(&curve)?;
    let report = dispersion_score(d, elbow.elbow_k, method, sweep_seed(seed, elbow.elbow_k))?;
    Ok((Some(elbow), report))
}
