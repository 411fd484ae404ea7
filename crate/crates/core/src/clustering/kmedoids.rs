//! K-medoids via PAM with a k-means++ style initialization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::matrix::DistanceMatrix;

use super::{check_k, ClusteringMethod, ClusteringResult};

/// Clusters the matrix into `k` groups.
///
/// Initialization picks the first medoid uniformly, then samples each next
/// medoid with probability proportional to the squared distance to its
/// nearest chosen medoid. The swap phase scans (medoid, candidate) pairs in
/// index order and applies the first strictly improving swap, restarting the
/// scan after each one; it terminates when a full scan finds none, so the
/// final inertia never exceeds the initialization's.
pub fn kmedoids(d: &DistanceMatrix, k: usize, seed: u64) -> Result<ClusteringResult> {
    check_k(k, d.n())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let medoids = init_medoids(d, k, &mut rng);
    let medoids = swap_until_stable(d, medoids);
    Ok(ClusteringResult::from_medoids(
        d,
        medoids,
        ClusteringMethod::KMedoids,
        true,
    ))
}

fn init_medoids(d: &DistanceMatrix, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = d.n();
    let mut medoids = Vec::with_capacity(k);
    medoids.push(rng.gen_range(0..n));
    let mut nearest: Vec<f64> = (0..n).map(|i| d.get(i, medoids[0])).collect();
    while medoids.len() < k {
        let weights: Vec<f64> = nearest.iter().map(|&x| x * x).collect();
        let total: f64 = weights.iter().sum();
        let next = if total > 0.0 {
            let mut x = rng.gen::<f64>() * total;
            // rounding in the subtraction walk must not land on a
            // zero-weight item (an already chosen medoid)
            let mut pick = weights.iter().rposition(|&w| w > 0.0).unwrap();
            for (i, &w) in weights.iter().enumerate() {
                if x < w {
                    pick = i;
                    break;
                }
                x -= w;
            }
            pick
        } else {
            // every item coincides with a chosen medoid
            let open: Vec<usize> = (0..n).filter(|i| !medoids.contains(i)).collect();
            open[rng.gen_range(0..open.len())]
        };
        medoids.push(next);
        for i in 0..n {
            let dn = d.get(i, next);
            if dn < nearest[i] {
                nearest[i] = dn;
            }
        }
    }
    medoids
}

struct Caches {
    /// position in the medoid list of each item's nearest medoid
    near: Vec<usize>,
    near_d: Vec<f64>,
    /// distance to the second-nearest medoid (infinity when k == 1)
    second_d: Vec<f64>,
}

fn build_caches(d: &DistanceMatrix, medoids: &[usize]) -> Caches {
    let n = d.n();
    let mut near = vec![0usize; n];
    let mut near_d = vec![0.0; n];
    let mut second_d = vec![f64::INFINITY; n];
    for i in 0..n {
        let mut n1 = 0usize;
        let mut d1 = f64::INFINITY;
        let mut d2 = f64::INFINITY;
        for (pos, &m) in medoids.iter().enumerate() {
            let dm = d.get(i, m);
            if dm < d1 {
                d2 = d1;
                d1 = dm;
                n1 = pos;
            } else if dm < d2 {
                d2 = dm;
            }
        }
        near[i] = n1;
        near_d[i] = d1;
        second_d[i] = d2;
    }
    Caches {
        near,
        near_d,
        second_d,
    }
}

fn swap_until_stable(d: &DistanceMatrix, mut medoids: Vec<usize>) -> Vec<usize> {
    let n = d.n();
    let k = medoids.len();
    if k == n {
        return medoids;
    }
    let mut caches = build_caches(d, &medoids);
    let mut inertia = super::medoid_set_inertia(d, &medoids);
    'scan: loop {
        let mut is_medoid = vec![false; n];
        for &m in &medoids {
            is_medoid[m] = true;
        }
        for pos in 0..k {
            for j in 0..n {
                if is_medoid[j] {
                    continue;
                }
                // d(o, j) read along row j (exact by symmetry)
                let row_j = d.row(j);
                let mut delta = 0.0;
                for o in 0..n {
                    let doj = row_j[o];
                    let new_d = if caches.near[o] == pos {
                        doj.min(caches.second_d[o])
                    } else {
                        doj.min(caches.near_d[o])
                    };
                    delta += new_d - caches.near_d[o];
                }
                if delta < 0.0 {
                    let old = medoids[pos];
                    medoids[pos] = j;
                    // accept only on an exact, canonically summed improvement
                    let new_inertia = super::medoid_set_inertia(d, &medoids);
                    if new_inertia < inertia {
                        inertia = new_inertia;
                        caches = build_caches(d, &medoids);
                        continue 'scan;
                    }
                    medoids[pos] = old;
                }
            }
        }
        return medoids;
    }
}
