//! Deterministic generators for the synthetic test beds: 2-D Gaussian
//! cluster datasets, sphere-to-cube morph clouds, and viewer-centered
//! rotation augmentation.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rotate_cloud, Point2, Point3, PointCloud, Viewpoint};

const SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

/// Default azimuth range grid for viewer-centered experiments, in degrees.
pub const DEFAULT_ALPHA_GRID: [f64; 7] = [0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0];

/// Elevation sampling range for viewpoints, in degrees.
pub const ELEVATION_RANGE_DEG: RangeInclusive<f64> = 20.0..=30.0;

/// Parameters of a 2-D Gaussian cluster dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToySpec {
    pub n_points: usize,
    pub n_clusters: usize,
    pub cluster_std: f64,
    pub box_half_width: f64,
    pub seed: u64,
}

impl Default for ToySpec {
    fn default() -> Self {
        Self {
            n_points: 200,
            n_clusters: 8,
            cluster_std: 1.0,
            box_half_width: 20.0,
            seed: 0,
        }
    }
}

impl ToySpec {
    pub fn with_std(cluster_std: f64) -> Self {
        Self {
            cluster_std,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_clusters == 0 || self.n_points < self.n_clusters {
            return Err(Error::InvalidSpec(format!(
                "need n_points >= n_clusters >= 1, got {} points, {} clusters",
                self.n_points, self.n_clusters
            )));
        }
        if !self.cluster_std.is_finite() || self.cluster_std <= 0.0 {
            return Err(Error::InvalidSpec("cluster_std must be positive".into()));
        }
        if !self.box_half_width.is_finite() || self.box_half_width <= 0.0 {
            return Err(Error::InvalidSpec("box_half_width must be positive".into()));
        }
        Ok(())
    }
}

/// Parameters of the sphere-to-cube morph family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorphSpec {
    pub n_shapes: usize,
    pub points_per_shape: usize,
    pub sphere_radius: f64,
    pub cube_half_edge: f64,
    pub seed: u64,
}

impl Default for MorphSpec {
    fn default() -> Self {
        Self {
            n_shapes: 1000,
            points_per_shape: 2500,
            sphere_radius: 1.0,
            cube_half_edge: 1.0,
            seed: 0,
        }
    }
}

impl MorphSpec {
    fn validate(&self) -> Result<()> {
        if self.n_shapes == 0 || self.points_per_shape == 0 {
            return Err(Error::InvalidSpec(
                "n_shapes and points_per_shape must be positive".into(),
            ));
        }
        if !(self.sphere_radius > 0.0 && self.sphere_radius.is_finite())
            || !(self.cube_half_edge > 0.0 && self.cube_half_edge.is_finite())
        {
            return Err(Error::InvalidSpec(
                "sphere_radius and cube_half_edge must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// 2-D points with the ground-truth cluster assignment they were drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledToyDataset {
    points: Vec<Point2>,
    true_labels: Vec<usize>,
    spec: ToySpec,
}

impl LabeledToyDataset {
    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn true_labels(&self) -> &[usize] {
        &self.true_labels
    }

    pub fn spec(&self) -> &ToySpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub(crate) fn from_parts(points: Vec<Point2>, true_labels: Vec<usize>, spec: ToySpec) -> Self {
        Self {
            points,
            true_labels,
            spec,
        }
    }
}

/// Draws cluster centers uniformly in the box, then assigns points to
/// clusters round-robin and offsets each by isotropic Gaussian noise.
pub fn gen_toy2d(spec: &ToySpec) -> Result<LabeledToyDataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let half = spec.box_half_width;
    let centers: Vec<(f64, f64)> = (0..spec.n_clusters)
        .map(|_| (rng.gen_range(-half..=half), rng.gen_range(-half..=half)))
        .collect();
    let mut points = Vec::with_capacity(spec.n_points);
    let mut labels = Vec::with_capacity(spec.n_points);
    for i in 0..spec.n_points {
        let c = i % spec.n_clusters;
        let nx: f64 = StandardNormal.sample(&mut rng);
        let ny: f64 = StandardNormal.sample(&mut rng);
        let (cx, cy) = centers[c];
        points.push(Point2::new(cx + nx * spec.cluster_std, cy + ny * spec.cluster_std)?);
        labels.push(c);
    }
    Ok(LabeledToyDataset::from_parts(points, labels, *spec))
}

/// One shape of the morph family at interpolation parameter `t` in [0, 1]:
/// 0 is the sphere, 1 the cube surface.
///
/// Directions are drawn uniformly on the unit sphere by normalizing Gaussian
/// triples (fixed draw count, no rejection). Each direction `u` is emitted at
/// the radial interpolation of the sphere point `r*u` and the cube point
/// `h*u / max(|ux|, |uy|, |uz|)`.
pub fn morph_shape(t: f64, spec: &MorphSpec, shape_seed: u64) -> Result<PointCloud> {
    spec.validate()?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidSpec(format!("morph t out of [0, 1]: {t}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(shape_seed);
    let r = spec.sphere_radius;
    let h = spec.cube_half_edge;
    let mut points = Vec::with_capacity(spec.points_per_shape);
    for _ in 0..spec.points_per_shape {
        let gx: f64 = StandardNormal.sample(&mut rng);
        let gy: f64 = StandardNormal.sample(&mut rng);
        let gz: f64 = StandardNormal.sample(&mut rng);
        let norm = (gx * gx + gy * gy + gz * gz).sqrt();
        let (ux, uy, uz) = if norm == 0.0 {
            (1.0, 0.0, 0.0)
        } else {
            (gx / norm, gy / norm, gz / norm)
        };
        let m = ux.abs().max(uy.abs()).max(uz.abs());
        let radial = (1.0 - t) * r + t * (h / m);
        points.push(Point3::new(ux * radial, uy * radial, uz * radial)?);
    }
    PointCloud::new(points)
}

/// Seed for shape `index` of a morph dataset started with `seed`.
pub fn shape_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ SEED_MIX.wrapping_mul(index as u64 + 1))
}

/// Generates the full morph family at evenly spaced `t`, sphere first, cube
/// last; every shape gets its own derived direction seed.
pub fn gen_morph_dataset(spec: &MorphSpec) -> Result<Vec<PointCloud>> {
    spec.validate()?;
    (0..spec.n_shapes)
        .map(|i| {
            let t = if spec.n_shapes == 1 {
                0.0
            } else {
                i as f64 / (spec.n_shapes - 1) as f64
            };
            morph_shape(t, spec, shape_seed(spec.seed, i))
        })
        .collect()
}

/// Draws a viewpoint with azimuth uniform in [-alpha, alpha] and elevation
/// uniform in [20, 30] degrees.
pub fn sample_viewpoint(alpha_deg: f64, seed: u64) -> Result<Viewpoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_viewpoint_in(alpha_deg, ELEVATION_RANGE_DEG, &mut rng)
}

/// General form with an explicit elevation range and caller-owned RNG.
pub fn sample_viewpoint_in(
    alpha_deg: f64,
    elevation_deg: RangeInclusive<f64>,
    rng: &mut impl Rng,
) -> Result<Viewpoint> {
    if !(0.0..=180.0).contains(&alpha_deg) {
        return Err(Error::InvalidSpec(format!(
            "alpha must be in [0, 180] degrees, got {alpha_deg}"
        )));
    }
    let (lo, hi) = (*elevation_deg.start(), *elevation_deg.end());
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidSpec("invalid elevation range".into()));
    }
    let az = rng.gen_range(-alpha_deg..=alpha_deg);
    let el = rng.gen_range(lo..=hi);
    Viewpoint::new(az, el)
}

/// Rotates every shape by an independently sampled viewpoint.
pub fn to_viewer_centered(
    shapes: &[PointCloud],
    alpha_deg: f64,
    seed: u64,
) -> Result<Vec<PointCloud>> {
    to_viewer_centered_within(shapes, alpha_deg, ELEVATION_RANGE_DEG, seed)
}

/// Viewer-centering with an explicit elevation range.
pub fn to_viewer_centered_within(
    shapes: &[PointCloud],
    alpha_deg: f64,
    elevation_deg: RangeInclusive<f64>,
    seed: u64,
) -> Result<Vec<PointCloud>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    shapes
        .iter()
        .map(|s| {
            let v = sample_viewpoint_in(alpha_deg, elevation_deg.clone(), &mut rng)?;
            Ok(rotate_cloud(s, &v))
        })
        .collect()
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
