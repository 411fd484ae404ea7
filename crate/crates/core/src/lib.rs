//! Dispersion-score toolkit: distance matrices, clustering backends,
//! inertia-based dispersion metrics, elbow detection, and synthetic dataset
//! generators.
//!
//! The central quantity is the dispersion score of a dataset under a
//! clustering: the sum of each item's distance to its cluster medoid,
//! divided by the number of items. Clustered data scores near zero;
//! dispersed data scores high.

pub mod clustering;
pub mod dispersion;
pub mod error;
pub mod geometry;
pub mod io;
pub mod matrix;
pub mod synth;

mod numeric;

pub use clustering::{
    affinity_propagation, brute_force_kmedoids, hierarchical, kmedoids, APConfig,
    ClusteringMethod, ClusteringResult,
};
pub use dispersion::{
    auto_ds, dispersion_score, inertia, kneedle_elbow, sweep, DispersionReport, ElbowReport,
    Method, SweepCurve,
};
pub use error::{Error, Result};
pub use geometry::{
    chamfer_distance, rotate_cloud, squared_euclidean, Point2, Point3, PointCloud, Viewpoint,
};
pub use matrix::{pairwise_matrix, DistanceMatrix};
pub use synth::{
    gen_morph_dataset, gen_toy2d, morph_shape, sample_viewpoint, to_viewer_centered,
    LabeledToyDataset, MorphSpec, ToySpec,
};
