//! Exhaustive k-medoids used as a test oracle.

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;

use super::{check_k, medoid_set_inertia, ClusteringMethod, ClusteringResult};

const GUARD: u64 = 1_000_000;

/// Evaluates every k-subset of items as a medoid set and returns the global
/// optimum. Ties go to the lexicographically smallest subset. Errors when
/// C(n, k) exceeds one million.
pub fn brute_force_kmedoids(d: &DistanceMatrix, k: usize) -> Result<ClusteringResult> {
    let n = d.n();
    check_k(k, n)?;
    if binomial(n, k) > GUARD {
        return Err(Error::GuardExceeded {
            n,
            k,
            limit: GUARD,
        });
    }

    let mut subset: Vec<usize> = (0..k).collect();
    let mut best = subset.clone();
    let mut best_inertia = medoid_set_inertia(d, &subset);
    while next_combination(&mut subset, n) {
        let inertia = medoid_set_inertia(d, &subset);
        if inertia < best_inertia {
            best_inertia = inertia;
            best.copy_from_slice(&subset);
        }
    }
    Ok(ClusteringResult::from_medoids(
        d,
        best,
        ClusteringMethod::KMedoids,
        true,
    ))
}

/// Advances `subset` to the next combination in lexicographic order.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in (i + 1)..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u64) {
            Some(v) => v / (i as u64 + 1),
            None => return u64::MAX,
        };
        if acc > GUARD * 2 {
            return acc; // enough to trip the guard
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::super::tests::matrix_from_values;
    use super::super::validate_result;
    use super::*;

    #[test]
    fn two_tight_pairs_optimum() {
        let d = matrix_from_values(&[0.0, 1.0, 10.0, 11.0]);
        let r = brute_force_kmedoids(&d, 2).unwrap();
        validate_result(&r, 4);
        assert_eq!(r.inertia(&d).unwrap(), 2.0);
        assert_eq!(r.medoids(), &[0, 2], "lexicographically smallest optimum");
    }

    #[test]
    fn k_equals_n() {
        let d = matrix_from_values(&[0.0, 5.0, 9.0]);
        let r = brute_force_kmedoids(&d, 3).unwrap();
        assert_eq!(r.inertia(&d).unwrap(), 0.0);
    }

    #[test]
    fn guard_trips() {
        let values: Vec<f64> = (0..60).map(|i| i as f64).collect();
        let d = matrix_from_values(&values);
        assert!(matches!(
            brute_force_kmedoids(&d, 20),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn combination_enumeration_is_complete() {
        let mut subset = vec![0, 1];
        let mut seen = vec![subset.clone()];
        while next_combination(&mut subset, 4) {
            seen.push(subset.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn inertia_non_increasing_in_k() {
        let values: Vec<f64> = (0..8).map(|i| ((i * i) as f64 * 0.61).sin() * 6.0).collect();
        let d = matrix_from_values(&values);
        let mut prev = f64::INFINITY;
        for k in 1..=8 {
            let inertia = brute_force_kmedoids(&d, k)
                .unwrap()
                .inertia(&d)
                .unwrap();
            assert!(inertia <= prev + 1e-12, "k={k}: {inertia} > {prev}");
            prev = inertia;
        }
        assert_eq!(prev, 0.0);
    }
}
