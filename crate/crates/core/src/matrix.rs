//! Symmetric pairwise distance matrices.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// A symmetric n-by-n matrix of pairwise distances with an exactly zero
/// diagonal. Stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Validates and wraps a row-major entry buffer.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::SizeMismatch {
                expected: n * n,
                actual: entries.len(),
            });
        }
        let m = Self { n, entries };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.n {
            if self.get(i, i) != 0.0 {
                return Err(Error::InvalidSpec(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..self.n {
                let d = self.get(i, j);
                if !d.is_finite() {
                    return Err(Error::NonFinite);
                }
                if d < 0.0 {
                    return Err(Error::InvalidSpec(format!("negative entry at ({i}, {j})")));
                }
                if d != self.get(j, i) {
                    return Err(Error::InvalidSpec(format!("asymmetry at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Off-diagonal entries in row-major order.
    pub fn off_diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n)
                .filter(move |&j| j != i)
                .map(move |j| self.get(i, j))
        })
    }
}

/// Builds the full matrix from a distance function over item pairs.
///
/// Only the upper triangle is computed; the diagonal is exactly zero without
/// invoking `dist`. Pairs are evaluated independently (in parallel when a
/// rayon pool is active), so the output is byte-identical for any thread
/// count. A failing pair is reported with its indices; the lowest row-major
/// pair wins when several fail.
pub fn pairwise_matrix<T, F>(items: &[T], dist: F) -> Result<DistanceMatrix>
where
    T: Sync,
    F: Fn(&T, &T) -> Result<f64> + Sync,
{
    let n = items.len();
    if n == 0 {
        return Err(Error::SizeMismatch {
            expected: 1,
            actual: 0,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let computed: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            dist(&items[i], &items[j]).map_err(|e| Error::Distance {
                i,
                j,
                source: Box::new(e),
            })
        })
        .collect();

    let mut entries = vec![0.0; n * n];
    for (&(i, j), value) in pairs.iter().zip(computed) {
        let d = value?;
        if !d.is_finite() || d < 0.0 {
            return Err(Error::Distance {
                i,
                j,
                source: Box::new(Error::NonFinite),
            });
        }
        entries[i * n + j] = d;
        entries[j * n + i] = d;
    }
    Ok(DistanceMatrix { n, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::squared_euclidean;

    #[test]
    fn single_item_is_zero_matrix() {
        let m = pairwise_matrix(&[vec![1.0, 2.0]], |a, b| squared_euclidean(a, b)).unwrap();
        assert_eq!(m.n(), 1);
        assert_eq!(m.get(0, 0), 0.0);
    }

    #[test]
    fn two_points_squared_euclidean() {
        let items = vec![vec![0.0, 0.0], vec![3.0, 4.0]];
        let m = pairwise_matrix(&items, |a, b| squared_euclidean(a, b)).unwrap();
        assert_eq!(m.entries(), &[0.0, 25.0, 25.0, 0.0]);
    }

    #[test]
    fn failing_pair_reports_indices() {
        let items = vec![vec![0.0], vec![1.0, 2.0], vec![3.0]];
        let err = pairwise_matrix(&items, |a, b| squared_euclidean(a, b)).unwrap_err();
        match err {
            Error::Distance { i, j, .. } => assert_eq!((i, j), (0, 1)),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_invalid_buffers() {
        assert!(DistanceMatrix::new(2, vec![0.0; 3]).is_err());
        assert!(DistanceMatrix::new(2, vec![0.5, 1.0, 1.0, 0.0]).is_err());
        assert!(DistanceMatrix::new(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(DistanceMatrix::new(2, vec![0.0, -1.0, -1.0, 0.0]).is_err());
        assert!(DistanceMatrix::new(2, vec![0.0, f64::NAN, f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn matches_naive_double_loop() {
        let items: Vec<Vec<f64>> = (0..15)
            .map(|i| vec![(i as f64 * 0.37).sin() * 5.0, (i as f64 * 0.71).cos() * 3.0])
            .collect();
        let m = pairwise_matrix(&items, |a, b| squared_euclidean(a, b)).unwrap();
        for i in 0..items.len() {
            for j in 0..items.len() {
                let expect = if i == j {
                    0.0
                } else {
                    squared_euclidean(&items[i], &items[j]).unwrap()
                };
                assert_eq!(m.get(i, j), expect, "entry ({i}, {j})");
            }
        }
    }
}
