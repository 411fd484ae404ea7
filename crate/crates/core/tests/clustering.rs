//! Cross-method clustering contracts on small random inputs.

use proptest::prelude::*;

use dispersal::clustering::{
    affinity_propagation, brute_force_kmedoids, hierarchical, kmedoids, APConfig,
    ClusteringResult,
};
use dispersal::matrix::{pairwise_matrix, DistanceMatrix};
use dispersal::squared_euclidean;

fn check_invariants(r: &ClusteringResult, n: usize) {
    assert_eq!(r.labels().len(), n);
    assert!(r.k() >= 1 && r.k() <= n);
    for w in r.medoids().windows(2) {
        assert!(w[0] < w[1], "medoids must be sorted and unique");
    }
    for (c, &m) in r.medoids().iter().enumerate() {
        assert!(m < n);
        assert_eq!(r.labels()[m], c, "medoid of cluster {c} carries its label");
    }
    let mut seen = vec![false; r.k()];
    for &l in r.labels() {
        assert!(l < r.k());
        seen[l] = true;
    }
    assert!(seen.iter().all(|&s| s), "cluster ids must be gap-free");
}

fn random_matrix(seed: u64, n: usize) -> DistanceMatrix {
    let pts: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let a = (i as f64 + seed as f64 * 0.13).sin() * 7.0;
            let b = ((i * i) as f64 * 0.29 + seed as f64).cos() * 7.0;
            vec![a, b]
        })
        .collect();
    pairwise_matrix(&pts, |a, b| squared_euclidean(a, b)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn all_methods_satisfy_result_invariants(seed in 0u64..5000, n in 3usize..14) {
        let m = random_matrix(seed, n);
        for k in [1, 2, n.min(3), n] {
            check_invariants(&kmedoids(&m, k, seed).unwrap(), n);
            check_invariants(&hierarchical(&m, k).unwrap(), n);
        }
        if let Ok(r) = affinity_propagation(&m, &APConfig::with_q(30.0), seed) {
            check_invariants(&r, n);
        }
    }

    #[test]
    fn brute_force_lower_bounds_pam(seed in 0u64..2000, n in 4usize..12) {
        let m = random_matrix(seed, n);
        for k in 1..=3usize {
            let opt = brute_force_kmedoids(&m, k).unwrap().inertia(&m).unwrap();
            let got = kmedoids(&m, k, seed).unwrap().inertia(&m).unwrap();
            prop_assert!(got >= opt - 1e-12, "heuristic beat the oracle: {got} < {opt}");
        }
    }

    #[test]
    fn brute_force_inertia_non_increasing_in_k(seed in 0u64..500, n in 3usize..10) {
        let m = random_matrix(seed, n);
        let mut prev = f64::INFINITY;
        for k in 1..=n {
            let inertia = brute_force_kmedoids(&m, k).unwrap().inertia(&m).unwrap();
            prop_assert!(inertia <= prev + 1e-12);
            prev = inertia;
        }
        prop_assert_eq!(prev, 0.0);
    }
}

#[test]
fn methods_are_deterministic() {
    let m = random_matrix(11, 30);
    let a = kmedoids(&m, 5, 42).unwrap();
    let b = kmedoids(&m, 5, 42).unwrap();
    assert_eq!(a, b);
    assert_eq!(hierarchical(&m, 5).unwrap(), hierarchical(&m, 5).unwrap());
    let cfg = APConfig::with_q(25.0);
    assert_eq!(
        affinity_propagation(&m, &cfg, 42).unwrap(),
        affinity_propagation(&m, &cfg, 42).unwrap()
    );
}

#[test]
fn clustering_json_shape_matches_contract() {
    let m = random_matrix(3, 10);
    let r = kmedoids(&m, 3, 1).unwrap();
    let inertia = r.inertia(&m).unwrap();
    let v = r.to_json(inertia);
    assert_eq!(v["method"], "kmedoids");
    assert_eq!(v["k"], 3);
    assert_eq!(v["labels"].as_array().unwrap().len(), 10);
    assert_eq!(v["medoids"].as_object().unwrap().len(), 3);
    assert_eq!(v["inertia"].as_f64().unwrap(), inertia);
    assert_eq!(v["converged"], true);
    // every labeled cluster id resolves through the medoid map
    for c in 0..3 {
        assert!(v["medoids"][c.to_string()].is_u64());
    }
}

#[test]
fn duplicate_items_collapse_to_zero_inertia() {
    // two copies of each of three distinct points
    let pts = vec![
        vec![0.0, 0.0],
        vec![0.0, 0.0],
        vec![5.0, 0.0],
        vec![5.0, 0.0],
        vec![0.0, 9.0],
        vec![0.0, 9.0],
    ];
    let m = pairwise_matrix(&pts, |a, b| squared_euclidean(a, b)).unwrap();
    assert_eq!(kmedoids(&m, 3, 7).unwrap().inertia(&m).unwrap(), 0.0);
    assert_eq!(hierarchical(&m, 3).unwrap().inertia(&m).unwrap(), 0.0);
    assert_eq!(brute_force_kmedoids(&m, 3).unwrap().inertia(&m).unwrap(), 0.0);
}
