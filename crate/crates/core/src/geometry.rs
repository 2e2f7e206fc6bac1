//! Points, datasets, and the small amount of vector arithmetic the engines need.
//!
//! Everything is `f64`. A [`Point`] is guaranteed non-empty and finite, and a
//! [`Dataset`] guarantees every point shares one dimension, so downstream code
//! only re-checks dimensions at API boundaries.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite point in `d`-dimensional Euclidean space, `d >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self(coords))
    }

    /// The origin of `dim`-dimensional space.
    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub(crate) fn from_coords_unchecked(coords: Vec<f64>) -> Point {
        debug_assert!(!coords.is_empty() && coords.iter().all(|c| c.is_finite()));
        Point(coords)
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `‖a − b‖₂`.
pub fn euclidean_distance(a: &Point, b: &Point) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    Ok(squared_distance(a.coords(), b.coords()).sqrt())
}

/// Coordinate-wise arithmetic mean of a non-empty list of points.
pub fn centroid(points: &[Point]) -> Result<Point> {
    let first = points.first().ok_or(Error::Empty("centroid input"))?;
    let dim = first.dim();
    let mut sum = vec![0.0; dim];
    for p in points {
        check_dim(dim, p.dim())?;
        for (s, c) in sum.iter_mut().zip(p.coords()) {
            *s += c;
        }
    }
    let n = points.len() as f64;
    sum.iter_mut().for_each(|s| *s /= n);
    Ok(Point(sum))
}

/// A non-empty collection of points sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<Point>,
    dim: usize,
}

impl Dataset {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let dim = points.first().ok_or(Error::Empty("dataset"))?.dim();
        for p in &points {
            check_dim(dim, p.dim())?;
        }
        Ok(Self { points, dim })
    }

    /// Builds a dataset from raw coordinate rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows.into_iter().map(Point::new).collect::<Result<_>>()?)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; kept for the usual collection idiom.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Returns a dataset with the points reordered so that row `i` holds `self[order[i]]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.len() {
            return Err(Error::LengthMismatch { left: order.len(), right: self.len() });
        }
        let points = order
            .iter()
            .map(|&i| {
                self.points
                    .get(i)
                    .cloned()
                    .ok_or(Error::IndexOutOfRange { index: i, len: self.len() })
            })
            .collect::<Result<_>>()?;
        Ok(Self { points, dim: self.dim })
    }
}

/// A dataset paired with dense ground-truth class ids `0..R`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    data: Dataset,
    labels: Vec<usize>,
    num_classes: usize,
}

impl LabeledDataset {
    /// Pairs data with labels that must already be dense (`0..R`, each used).
    pub fn new(data: Dataset, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != data.len() {
            return Err(Error::LengthMismatch { left: data.len(), right: labels.len() });
        }
        let num_classes = dense_label_count(&labels)?;
        Ok(Self { data, labels, num_classes })
    }

    /// Pairs data with arbitrary integer labels, remapping them to dense ids
    /// in ascending order of the original values.
    pub fn from_raw_labels(data: Dataset, raw: &[i64]) -> Result<Self> {
        let (labels, _) = remap_labels(raw);
        Self::new(data, labels)
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn into_parts(self) -> (Dataset, Vec<usize>) {
        (self.data, self.labels)
    }
}

/// Maps arbitrary labels onto `0..R` in ascending order of value.
/// Returns the dense labels and the original value of each dense id.
pub fn remap_labels(raw: &[i64]) -> (Vec<usize>, Vec<i64>) {
    let mut ids = BTreeMap::new();
    for &r in raw {
        ids.entry(r).or_insert(0usize);
    }
    let originals: Vec<i64> = ids.keys().copied().collect();
    for (dense, id) in ids.values_mut().enumerate() {
        *id = dense;
    }
    (raw.iter().map(|r| ids[r]).collect(), originals)
}

/// Number of distinct ids, provided they form exactly `0..R`.
pub(crate) fn dense_label_count(labels: &[usize]) -> Result<usize> {
    let count = labels.iter().max().map_or(0, |m| m + 1);
    let mut seen = vec![false; count];
    for &l in labels {
        seen[l] = true;
    }
    match seen.iter().position(|s| !s) {
        Some(missing) => Err(Error::SparseLabels { missing, count }),
        None => Ok(count),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn point_rejects_empty_and_non_finite() {
        assert_eq!(Point::new(vec![]), Err(Error::EmptyPoint));
        assert!(matches!(Point::new(vec![1.0, f64::NAN]), Err(Error::NonFinite { index: 1, .. })));
        assert!(Point::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn distance_fixtures() {
        assert_eq!(euclidean_distance(&p(&[0.0, 0.0]), &p(&[0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(euclidean_distance(&p(&[0.0, 0.0]), &p(&[3.0, 4.0])).unwrap(), 5.0);
        assert_eq!(
            euclidean_distance(&p(&[0.0]), &p(&[0.0, 1.0])),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn distance_matches_sum_of_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a: Vec<f64> = (0..3).map(|_| rng.random_range(-10.0..10.0)).collect();
            let b: Vec<f64> = (0..3).map(|_| rng.random_range(-10.0..10.0)).collect();
            let mut acc = 0.0;
            for k in 0..3 {
                let diff = a[k] - b[k];
                acc += diff * diff;
            }
            let d = euclidean_distance(&p(&a), &p(&b)).unwrap();
            assert!((d - acc.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn centroid_fixtures() {
        assert_eq!(centroid(&[p(&[0.0, 0.0]), p(&[2.0, 0.0])]).unwrap(), p(&[1.0, 0.0]));
        assert_eq!(centroid(&[p(&[1.0, 1.0])]).unwrap(), p(&[1.0, 1.0]));
        assert_eq!(centroid(&[]), Err(Error::Empty("centroid input")));
        assert!(centroid(&[p(&[1.0]), p(&[1.0, 2.0])]).is_err());
    }

    #[test]
    fn centroid_matches_sum_over_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<Point> =
            (0..10).map(|_| p(&[rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)])).collect();
        let c = centroid(&pts).unwrap();
        for k in 0..2 {
            let mut s = 0.0;
            for q in &pts {
                s += q.coords()[k];
            }
            assert!((c.coords()[k] - s / 10.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dataset_requires_uniform_dimension() {
        assert!(Dataset::new(vec![]).is_err());
        assert!(Dataset::new(vec![p(&[1.0]), p(&[1.0, 2.0])]).is_err());
        assert_eq!(Dataset::new(vec![p(&[1.0, 2.0])]).unwrap().dim(), 2);
    }

    #[test]
    fn labels_are_remapped_densely() {
        let data = Dataset::from_rows(vec![vec![0.0]; 4]).unwrap();
        let ld = LabeledDataset::from_raw_labels(data.clone(), &[7, -2, 7, 30]).unwrap();
        assert_eq!(ld.labels(), &[1, 0, 1, 2]);
        assert_eq!(ld.num_classes(), 3);
        assert!(matches!(
            LabeledDataset::new(data, vec![0, 2, 2, 0]),
            Err(Error::SparseLabels { missing: 1, count: 3 })
        ));
    }

    fn coords(dim: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1e3..1e3f64, dim)
    }

    proptest! {
        #[test]
        fn triangle_inequality(a in coords(3), b in coords(3), c in coords(3)) {
            let (a, b, c) = (p(&a), p(&b), p(&c));
            let ab = euclidean_distance(&a, &b).unwrap();
            let bc = euclidean_distance(&b, &c).unwrap();
            let ac = euclidean_distance(&a, &c).unwrap();
            prop_assert!(ac <= ab + bc + 1e-9);
            prop_assert_eq!(ab, euclidean_distance(&b, &a).unwrap());
        }

        #[test]
        fn centroid_inside_bounding_box(rows in prop::collection::vec(coords(2), 1..30)) {
            let pts: Vec<Point> = rows.iter().map(|r| p(r)).collect();
            let c = centroid(&pts).unwrap();
            for k in 0..2 {
                let lo = rows.iter().map(|r| r[k]).fold(f64::INFINITY, f64::min);
                let hi = rows.iter().map(|r| r[k]).fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(c.coords()[k] >= lo - 1e-9 && c.coords()[k] <= hi + 1e-9);
            }
        }
    }
}
