//! Point types, distance functions, and rigid viewpoint rotations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::pairwise_mean;

/// A 2-D point with finite coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn coords(&self) -> [f64; 2] {
        [self.x, self.y]
    }
}

/// A 3-D point with finite coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && z.is_finite() {
            Ok(Self { x, y, z })
        } else {
            Err(Error::NonFinite)
        }
    }

    fn sq_dist(&self, other: &Point3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        dx * dx + dy * dy + dz * dz
    }
}

/// An ordered, nonempty list of 3-D points representing one shape sample.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Point3>,
}

impl PointCloud {
    /// Builds a cloud, rejecting empty input. Point coordinates are already
    /// finite by construction of [`Point3`].
    pub fn new(points: Vec<Point3>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::SizeMismatch {
                expected: 1,
                actual: 0,
            });
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }
}

/// A camera viewpoint: azimuth normalized to (-180, 180], elevation in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewpoint {
    azimuth_deg: f64,
    elevation_deg: f64,
}

impl Viewpoint {
    pub fn new(azimuth_deg: f64, elevation_deg: f64) -> Result<Self> {
        if !azimuth_deg.is_finite() || !elevation_deg.is_finite() {
            return Err(Error::NonFinite);
        }
        let mut az = azimuth_deg % 360.0;
        if az <= -180.0 {
            az += 360.0;
        } else if az > 180.0 {
            az -= 360.0;
        }
        Ok(Self {
            azimuth_deg: az,
            elevation_deg,
        })
    }

    pub fn azimuth_deg(&self) -> f64 {
        self.azimuth_deg
    }

    pub fn elevation_deg(&self) -> f64 {
        self.elevation_deg
    }
}

/// Sum of squared component differences between two equal-length vectors.
///
/// Symmetric, non-negative, and zero exactly when `a == b`.
pub fn squared_euclidean(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    Ok(acc)
}

/// Symmetric point-set distance: mean squared nearest-neighbor distance from
/// `x` into `y` plus the same from `y` into `x`.
///
/// Uses exact brute-force nearest neighbors and a canonical summation order,
/// so the value is reproducible bit for bit.
pub fn chamfer_distance(x: &PointCloud, y: &PointCloud) -> f64 {
    directed_mean_sq(x, y) + directed_mean_sq(y, x)
}

fn directed_mean_sq(from: &PointCloud, to: &PointCloud) -> f64 {
    let mins: Vec<f64> = from
        .points()
        .iter()
        .map(|p| {
            let mut best = f64::INFINITY;
            for q in to.points() {
                let d = p.sq_dist(q);
                if d < best {
                    best = d;
                }
            }
            best
        })
        .collect();
    pairwise_mean(&mins)
}

/// Rotates every point by azimuth about +z, then elevation about the rotated
/// y-axis (right-handed, both negated so a viewpoint maps the viewed shape
/// into the viewer's frame).
pub fn rotate_cloud(cloud: &PointCloud, v: &Viewpoint) -> PointCloud {
    let az = -v.azimuth_deg().to_radians();
    let el = -v.elevation_deg().to_radians();
    let (sa, ca) = az.sin_cos();
    let (se, ce) = el.sin_cos();
    // R_z(az') * R_y(el') row-major
    let m = [
        [ca * ce, -sa, ca * se],
        [sa * ce, ca, sa * se],
        [-se, 0.0, ce],
    ];
    let points = cloud
        .points()
        .iter()
        .map(|p| Point3 {
            x: m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
            y: m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
            z: m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z,
        })
        .collect();
    PointCloud { points }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(pts: &[(f64, f64, f64)]) -> PointCloud {
        PointCloud::new(
            pts.iter()
                .map(|&(x, y, z)| Point3::new(x, y, z).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn squared_euclidean_examples() {
        assert_eq!(squared_euclidean(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 25.0);
        assert_eq!(squared_euclidean(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(
            squared_euclidean(&[1.0, 0.0, -1.0], &[0.0, 0.0, 1.0]).unwrap(),
            5.0
        );
    }

    #[test]
    fn squared_euclidean_dimension_mismatch() {
        assert!(matches!(
            squared_euclidean(&[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        ));
        assert!(squared_euclidean(&[], &[]).is_err());
    }

    #[test]
    fn chamfer_single_points() {
        let x = cloud(&[(0.0, 0.0, 0.0)]);
        let y = cloud(&[(1.0, 0.0, 0.0)]);
        assert_eq!(chamfer_distance(&x, &y), 2.0);
    }

    #[test]
    fn chamfer_identity_is_zero() {
        let x = cloud(&[(0.5, -1.0, 2.0), (3.0, 3.0, 3.0), (0.0, 0.0, 1.0)]);
        assert_eq!(chamfer_distance(&x, &x), 0.0);
    }

    #[test]
    fn chamfer_asymmetric_sizes() {
        // nearest neighbors by hand: forward (0 + 4)/2 = 2, backward 0/1 = 0
        let x = cloud(&[(0.0, 0.0, 0.0), (2.0, 0.0, 0.0)]);
        let y = cloud(&[(0.0, 0.0, 0.0)]);
        assert_eq!(chamfer_distance(&x, &y), 2.0);
        assert_eq!(chamfer_distance(&y, &x), 2.0);
    }

    #[test]
    fn rotation_identity() {
        let s = cloud(&[(1.0, 2.0, 3.0), (-0.5, 0.25, 0.0)]);
        let v = Viewpoint::new(0.0, 0.0).unwrap();
        let r = rotate_cloud(&s, &v);
        for (a, b) in s.points().iter().zip(r.points()) {
            assert!((a.x - b.x).abs() < 1e-15);
            assert!((a.y - b.y).abs() < 1e-15);
            assert!((a.z - b.z).abs() < 1e-15);
        }
    }

    #[test]
    fn rotation_quarter_turn_about_z() {
        let s = cloud(&[(1.0, 0.0, 0.0)]);
        let v = Viewpoint::new(90.0, 0.0).unwrap();
        let r = rotate_cloud(&s, &v);
        let p = r.points()[0];
        assert!((p.x - 0.0).abs() < 1e-12);
        assert!((p.y - -1.0).abs() < 1e-12);
        assert!((p.z - 0.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_preserves_count_and_self_distance() {
        let s = cloud(&[(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)]);
        let v = Viewpoint::new(33.0, 21.5).unwrap();
        let r = rotate_cloud(&s, &v);
        assert_eq!(r.len(), s.len());
        assert_eq!(chamfer_distance(&r, &r), 0.0);
    }

    #[test]
    fn viewpoint_normalizes_azimuth() {
        assert_eq!(Viewpoint::new(270.0, 0.0).unwrap().azimuth_deg(), -90.0);
        assert_eq!(Viewpoint::new(-180.0, 0.0).unwrap().azimuth_deg(), 180.0);
        assert_eq!(Viewpoint::new(180.0, 0.0).unwrap().azimuth_deg(), 180.0);
        assert_eq!(Viewpoint::new(540.0, 0.0).unwrap().azimuth_deg(), 180.0);
        assert!(Viewpoint::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn point_constructors_reject_non_finite() {
        assert!(Point2::new(f64::INFINITY, 0.0).is_err());
        assert!(Point3::new(0.0, f64::NAN, 0.0).is_err());
        assert!(PointCloud::new(vec![]).is_err());
    }
}
