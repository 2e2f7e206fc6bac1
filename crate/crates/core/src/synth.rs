//! Gaussian-mixture datasets, including the seven built-in benchmark sets.
//!
//! Class `r` contributes `count` samples `mean + L·z`, where `L` is the lower
//! Cholesky factor of its covariance and `z` holds independent standard
//! normals. Normals come from the ziggurat sampler of `rand_distr` driven by
//! the crate's seeded ChaCha8 stream, one class after another, so a
//! `(spec, seed)` pair always yields the same dataset.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_dim, Dataset, LabeledDataset, Point};
use crate::rng::seeded;

const SYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianClass {
    pub mean: Point,
    /// Row-major `d×d` symmetric positive-definite matrix.
    pub covariance: Vec<Vec<f64>>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub classes: Vec<GaussianClass>,
}

impl MixtureSpec {
    pub fn dim(&self) -> usize {
        self.classes.first().map_or(0, |c| c.mean.dim())
    }

    pub fn counts(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.count).collect()
    }

    pub fn total(&self) -> usize {
        self.classes.iter().map(|c| c.count).sum()
    }

    /// The same mixture with every class resized to `count` samples.
    pub fn with_uniform_count(mut self, count: usize) -> Self {
        self.classes.iter_mut().for_each(|c| c.count = count);
        self
    }

    /// Checks shapes and counts and returns the Cholesky factor of each class.
    pub fn cholesky_factors(&self) -> Result<Vec<DMatrix<f64>>> {
        let dim = self.dim();
        if self.classes.is_empty() {
            return Err(Error::Empty("mixture classes"));
        }
        self.classes
            .iter()
            .enumerate()
            .map(|(class, c)| {
                check_dim(dim, c.mean.dim())?;
                if c.count == 0 {
                    return Err(Error::InvalidParameter { name: "count", reason: format!("class {class} has no samples") });
                }
                check_dim(dim, c.covariance.len())?;
                for row in &c.covariance {
                    check_dim(dim, row.len())?;
                }
                let m = DMatrix::from_fn(dim, dim, |i, j| c.covariance[i][j]);
                let symmetric = (0..dim).all(|i| (0..i).all(|j| (m[(i, j)] - m[(j, i)]).abs() <= SYMMETRY_TOLERANCE));
                if !symmetric || m.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NotPositiveDefinite { class });
                }
                m.cholesky().map(|ch| ch.l()).ok_or(Error::NotPositiveDefinite { class })
            })
            .collect()
    }
}

/// Draws a labeled dataset: all of class 0, then class 1, and so on.
pub fn sample_mixture(spec: &MixtureSpec, seed: u64) -> Result<LabeledDataset> {
    let factors = spec.cholesky_factors()?;
    let dim = spec.dim();
    let mut rng = seeded(seed);
    let mut points = Vec::with_capacity(spec.total());
    let mut labels = Vec::with_capacity(spec.total());
    for (r, (class, l)) in spec.classes.iter().zip(&factors).enumerate() {
        let mean = DVector::from_column_slice(class.mean.coords());
        for _ in 0..class.count {
            let z = DVector::from_fn(dim, |_, _| StandardNormal.sample(&mut rng));
            let x = &mean + l * z;
            points.push(Point::new(x.iter().copied().collect())?);
            labels.push(r);
        }
    }
    LabeledDataset::new(Dataset::new(points)?, labels)
}

fn class(mean: &[f64], covariance: &[&[f64]], count: usize) -> GaussianClass {
    GaussianClass {
        mean: Point::new(mean.to_vec()).expect("built-in means are finite"),
        covariance: covariance.iter().map(|r| r.to_vec()).collect(),
        count,
    }
}

fn isotropic2(v: f64) -> [[f64; 2]; 2] {
    [[v, 0.0], [0.0, v]]
}

fn planar_set(covariances: [[[f64; 2]; 2]; 3], counts: [usize; 3]) -> MixtureSpec {
    let means = [[1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]];
    MixtureSpec {
        classes: (0..3)
            .map(|r| class(&means[r], &[&covariances[r][0], &covariances[r][1]], counts[r]))
            .collect(),
    }
}

/// Number of built-in benchmark sets.
pub const BUILTIN_SETS: u32 = 7;

/// The built-in benchmark mixtures, ids `1..=7`.
///
/// Sets 1–6 are planar mixtures of three classes centered at `(1,1)`,
/// `(−1,−1)`, `(1,−1)`; set 7 has four classes in three dimensions.
pub fn builtin_set(id: u32) -> Result<MixtureSpec> {
    let narrow = isotropic2(0.36);
    let broad = isotropic2(0.64);
    Ok(match id {
        1 => planar_set([narrow; 3], [250; 3]),
        2 => planar_set([broad; 3], [250; 3]),
        3 => planar_set([broad; 3], [50; 3]),
        4 => planar_set([broad; 3], [1500; 3]),
        5 => planar_set([broad; 3], [100, 300, 20]),
        6 => planar_set([broad, [[0.73, 0.48], [0.48, 0.73]], [[1.09, -0.60], [-0.60, 1.09]]], [250; 3]),
        7 => MixtureSpec {
            classes: vec![
                class(&[1.0, 1.0, 1.0], &[&[0.64, 0.0, 0.0], &[0.0, 0.64, 0.0], &[0.0, 0.0, 0.64]], 250),
                class(&[-1.0, -1.0, 0.0], &[&[0.74, 0.50, -0.20], &[0.50, 0.77, -0.31], &[-0.20, -0.31, 0.41]], 300),
                class(&[1.0, -1.0, 0.0], &[&[1.09, -0.60, -0.24], &[-0.60, 1.73, 1.60], &[-0.24, 1.60, 1.64]], 200),
                class(&[-2.0, 2.0, 2.0], &[&[0.77, 0.58, 0.73], &[0.58, 0.56, 0.46], &[0.73, 0.46, 0.78]], 200),
            ],
        },
        other => return Err(Error::UnknownSet(other)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_stats(points: &[&Point]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let n = points.len() as f64;
        let d = points[0].dim();
        let mut mean = vec![0.0; d];
        for p in points {
            for k in 0..d {
                mean[k] += p.coords()[k] / n;
            }
        }
        let mut cov = vec![vec![0.0; d]; d];
        for p in points {
            for i in 0..d {
                for j in 0..d {
                    cov[i][j] += (p.coords()[i] - mean[i]) * (p.coords()[j] - mean[j]) / (n - 1.0);
                }
            }
        }
        (mean, cov)
    }

    #[test]
    fn standard_normal_moments() {
        let spec = MixtureSpec { classes: vec![class(&[0.0, 0.0], &[&[1.0, 0.0], &[0.0, 1.0]], 1000)] };
        for seed in [0, 1, 99] {
            let ds = sample_mixture(&spec, seed).unwrap();
            let pts: Vec<&Point> = ds.data().points().iter().collect();
            let (mean, cov) = sample_stats(&pts);
            for k in 0..2 {
                assert!(mean[k].abs() < 0.15, "{mean:?}");
                for j in 0..2 {
                    let target = if k == j { 1.0 } else { 0.0 };
                    assert!((cov[k][j] - target).abs() < 0.2, "{cov:?}");
                }
            }
        }
    }

    #[test]
    fn labels_follow_counts() {
        let spec = MixtureSpec {
            classes: vec![class(&[0.0], &[&[1.0]], 3), class(&[5.0], &[&[2.0]], 5)],
        };
        let ds = sample_mixture(&spec, 4).unwrap();
        assert_eq!(ds.labels(), &[0, 0, 0, 1, 1, 1, 1, 1]);
        assert_eq!(ds.num_classes(), 2);
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let spec = builtin_set(6).unwrap();
        assert_eq!(sample_mixture(&spec, 12).unwrap(), sample_mixture(&spec, 12).unwrap());
        assert_ne!(sample_mixture(&spec, 12).unwrap(), sample_mixture(&spec, 13).unwrap());
    }

    #[test]
    fn builtin_values() {
        assert_eq!(builtin_set(1).unwrap().classes[0].mean.coords(), &[1.0, 1.0]);
        assert_eq!(builtin_set(1).unwrap().classes[2].covariance, vec![vec![0.36, 0.0], vec![0.0, 0.36]]);
        assert_eq!(builtin_set(2).unwrap().classes[1].covariance, vec![vec![0.64, 0.0], vec![0.0, 0.64]]);
        assert_eq!(builtin_set(3).unwrap().counts(), vec![50; 3]);
        assert_eq!(builtin_set(4).unwrap().total(), 4500);
        assert_eq!(builtin_set(5).unwrap().counts(), vec![100, 300, 20]);
        assert_eq!(builtin_set(6).unwrap().classes[2].covariance, vec![vec![1.09, -0.60], vec![-0.60, 1.09]]);
        let s7 = builtin_set(7).unwrap();
        assert_eq!(s7.dim(), 3);
        assert_eq!(s7.counts(), vec![250, 300, 200, 200]);
        assert_eq!(s7.classes[3].mean.coords(), &[-2.0, 2.0, 2.0]);
        assert_eq!(
            s7.classes[3].covariance,
            vec![vec![0.77, 0.58, 0.73], vec![0.58, 0.56, 0.46], vec![0.73, 0.46, 0.78]]
        );
        assert_eq!(builtin_set(0), Err(Error::UnknownSet(0)));
        assert_eq!(builtin_set(8), Err(Error::UnknownSet(8)));
    }

    #[test]
    fn every_builtin_covariance_is_positive_definite() {
        for id in 1..=BUILTIN_SETS {
            let spec = builtin_set(id).unwrap();
            assert_eq!(spec.cholesky_factors().unwrap().len(), spec.classes.len());
        }
    }

    #[test]
    fn invalid_covariance_names_the_class() {
        let spec = MixtureSpec {
            classes: vec![
                class(&[0.0, 0.0], &[&[1.0, 0.0], &[0.0, 1.0]], 2),
                class(&[0.0, 0.0], &[&[1.0, 2.0], &[2.0, 1.0]], 2),
            ],
        };
        assert_eq!(sample_mixture(&spec, 0), Err(Error::NotPositiveDefinite { class: 1 }));
        let asym = MixtureSpec { classes: vec![class(&[0.0, 0.0], &[&[1.0, 0.5], &[0.0, 1.0]], 2)] };
        assert_eq!(sample_mixture(&asym, 0), Err(Error::NotPositiveDefinite { class: 0 }));
        let bad_shape = MixtureSpec { classes: vec![class(&[0.0, 0.0], &[&[1.0]], 2)] };
        assert!(matches!(sample_mixture(&bad_shape, 0), Err(Error::DimensionMismatch { .. })));
        let empty = MixtureSpec { classes: vec![class(&[0.0], &[&[1.0]], 0)] };
        assert!(sample_mixture(&empty, 0).is_err());
    }

    #[test]
    fn large_sample_means_within_four_sigma() {
        let spec = builtin_set(2).unwrap().with_uniform_count(2000);
        let ds = sample_mixture(&spec, 5).unwrap();
        for (r, c) in spec.classes.iter().enumerate() {
            let pts: Vec<&Point> =
                ds.data().points().iter().zip(ds.labels()).filter(|(_, &l)| l == r).map(|(p, _)| p).collect();
            let (mean, _) = sample_stats(&pts);
            for k in 0..2 {
                let sigma = c.covariance[k][k].sqrt();
                assert!((mean[k] - c.mean.coords()[k]).abs() <= 4.0 * sigma / (pts.len() as f64).sqrt());
            }
        }
    }
}
