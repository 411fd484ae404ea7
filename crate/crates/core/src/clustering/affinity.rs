//! Affinity propagation over a similarity matrix derived from distances.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::numeric::{pairwise_mean, percentile_sorted};

use super::{ClusteringMethod, ClusteringResult};

/// Affinity propagation hyperparameters.
///
/// The preference is set to the q-th percentile (from the bottom, linear
/// interpolation) of the off-diagonal similarities; small q means few
/// exemplars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct APConfig {
    pub preference_percentile_q: f64,
    pub damping: f64,
    pub max_iterations: usize,
    pub convergence_window: usize,
}

impl Default for APConfig {
    fn default() -> Self {
        Self {
            preference_percentile_q: 4.0,
            damping: 0.5,
            max_iterations: 200,
            convergence_window: 15,
        }
    }
}

impl APConfig {
    pub fn with_q(q: f64) -> Self {
        Self {
            preference_percentile_q: q,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.preference_percentile_q > 0.0 && self.preference_percentile_q <= 100.0) {
            return Err(Error::InvalidSpec(format!(
                "preference percentile q must be in (0, 100], got {}",
                self.preference_percentile_q
            )));
        }
        if !(0.5..1.0).contains(&self.damping) {
            return Err(Error::InvalidSpec(format!(
                "damping must be in [0.5, 1), got {}",
                self.damping
            )));
        }
        if self.max_iterations == 0 || self.convergence_window == 0 {
            return Err(Error::InvalidSpec(
                "max_iterations and convergence_window must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Clusters by responsibility/availability message passing. The similarity
/// is `exp(-d / sigma)` with sigma the population standard deviation of the
/// off-diagonal distances; sigma of zero is rejected as degenerate. The
/// number of clusters is emergent. A result that stops improving before the
/// exemplar set is stable for `convergence_window` iterations is returned
/// with `converged == false`.
pub fn affinity_propagation(
    d: &DistanceMatrix,
    cfg: &APConfig,
    seed: u64,
) -> Result<ClusteringResult> {
    cfg.validate()?;
    let n = d.n();
    if n < 2 {
        return Err(Error::InvalidSpec(
            "affinity propagation needs at least 2 items".into(),
        ));
    }

    let off: Vec<f64> = d.off_diagonal().collect();
    let mean = pairwise_mean(&off);
    let sq_dev: Vec<f64> = off.iter().map(|x| (x - mean) * (x - mean)).collect();
    let sigma = pairwise_mean(&sq_dev).sqrt();
    if sigma == 0.0 {
        return Err(Error::DegenerateMatrix);
    }

    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s[i * n + j] = (-d.get(i, j) / sigma).exp();
            }
        }
    }
    let mut sims: Vec<f64> = (0..n)
        .flat_map(|i| {
            let s = &s;
            (0..n).filter(move |&j| j != i).map(move |j| s[i * n + j])
        })
        .collect();
    sims.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let preference = percentile_sorted(&sims, cfg.preference_percentile_q);
    for i in 0..n {
        s[i * n + i] = preference;
    }

    // eps-scale jitter so exactly symmetric inputs cannot oscillate forever
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in s.iter_mut() {
        let noise: f64 = StandardNormal.sample(&mut rng);
        *v += (f64::EPSILON * v.abs() + f64::MIN_POSITIVE * 100.0) * noise;
    }

    let mut resp = vec![0.0; n * n];
    let mut avail = vec![0.0; n * n];
    let damp = cfg.damping;
    let mut exemplars: Vec<usize> = Vec::new();
    let mut streak = 0usize;
    let mut converged = false;

    for _ in 0..cfg.max_iterations {
        // responsibilities
        for i in 0..n {
            let row = i * n;
            let mut max1 = f64::NEG_INFINITY;
            let mut max2 = f64::NEG_INFINITY;
            let mut arg1 = 0usize;
            for k in 0..n {
                let v = avail[row + k] + s[row + k];
                if v > max1 {
                    max2 = max1;
                    max1 = v;
                    arg1 = k;
                } else if v > max2 {
                    max2 = v;
                }
            }
            for k in 0..n {
                let bound = if k == arg1 { max2 } else { max1 };
                let new = s[row + k] - bound;
                resp[row + k] = damp * resp[row + k] + (1.0 - damp) * new;
            }
        }
        // availabilities
        for k in 0..n {
            let mut pos_sum = 0.0;
            for i in 0..n {
                if i != k {
                    pos_sum += resp[i * n + k].max(0.0);
                }
            }
            let rkk = resp[k * n + k];
            for i in 0..n {
                let new = if i == k {
                    pos_sum
                } else {
                    (rkk + pos_sum - resp[i * n + k].max(0.0)).min(0.0)
                };
                avail[i * n + k] = damp * avail[i * n + k] + (1.0 - damp) * new;
            }
        }
        let current: Vec<usize> = (0..n)
            .filter(|&k| avail[k * n + k] + resp[k * n + k] > 0.0)
            .collect();
        if !current.is_empty() && current == exemplars {
            streak += 1;
            if streak >= cfg.convergence_window {
                converged = true;
                break;
            }
        } else {
            streak = 1;
            exemplars = current;
        }
    }

    if exemplars.is_empty() {
        // no exemplar emerged; fall back to the 1-medoid solution
        let medoid = (0..n)
            .min_by(|&a, &b| {
                let sa: f64 = (0..n).map(|j| d.get(a, j)).sum();
                let sb: f64 = (0..n).map(|j| d.get(b, j)).sum();
                sa.partial_cmp(&sb).unwrap()
            })
            .unwrap();
        return Ok(ClusteringResult::from_labeled(
            vec![0; n],
            vec![medoid],
            ClusteringMethod::AffinityPropagation,
            false,
        ));
    }

    let labels = assign_by_similarity(&s, n, &exemplars);
    // refine each exemplar to the member maximizing intra-cluster similarity
    let mut refined = Vec::with_capacity(exemplars.len());
    for c in 0..exemplars.len() {
        let members: Vec<usize> = (0..n).filter(|&i| labels[i] == c).collect();
        let mut best = members[0];
        let mut best_sum = f64::NEG_INFINITY;
        for &j in &members {
            let sum: f64 = members.iter().map(|&i| s[i * n + j]).sum();
            if sum > best_sum {
                best_sum = sum;
                best = j;
            }
        }
        refined.push(best);
    }
    refined.sort_unstable();
    refined.dedup();
    let labels = assign_by_similarity(&s, n, &refined);
    Ok(ClusteringResult::from_labeled(
        labels,
        refined,
        ClusteringMethod::AffinityPropagation,
        converged,
    ))
}

/// Most-similar exemplar per item; exemplars map to their own cluster.
fn assign_by_similarity(s: &[f64], n: usize, exemplars: &[usize]) -> Vec<usize> {
    (0..n)
        .map(|i| {
            if let Some(c) = exemplars.iter().position(|&e| e == i) {
                return c;
            }
            let mut best = 0usize;
            let mut best_s = f64::NEG_INFINITY;
            for (c, &e) in exemplars.iter().enumerate() {
                let v = s[i * n + e];
                if v > best_s {
                    best_s = v;
                    best = c;
                }
            }
            best
        })
        .collect()
}
