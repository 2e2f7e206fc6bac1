//! Flat-kernel mean-shift clustering.
//!
//! Both engines move points by the mean-shift vector
//! `m_h(x) = mean(S_h(x)) − x` and finish by merging the converged positions
//! into single-linkage components at distance `th2`.
//!
//! * [`cluster_deterministic`] climbs each datum to convergence against the
//!   frozen original data, one datum at a time.
//! * [`cluster_stochastic`] repeatedly picks a random datum, shifts it once
//!   against the *current* positions of all data, and keeps it there, so the
//!   whole set climbs together.

mod deterministic;
mod merge;
mod stochastic;

pub use deterministic::cluster_deterministic;
pub use merge::merge_modes;
pub use stochastic::cluster_stochastic;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_dim, Point};
use crate::neighbors::{NeighborIndex, Strategy};

/// Per-datum iteration cap for the deterministic engine.
pub const DEFAULT_MAX_INNER_ITERS: usize = 500;

/// Stochastic shift budget, as a multiple of the dataset size.
pub const DEFAULT_BUDGET_PASSES: usize = 100;

/// Hyperparameters for either engine.
///
/// `global_iter_budget` and `stagnation_window` default to `100·J` and `J`
/// when left unset, `J` being the dataset size at run time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Bandwidth: radius of the neighborhood ball.
    pub h: f64,
    /// A shift whose norm is at most `th1` counts as converged.
    pub th1: f64,
    /// Converged positions at distance at most `th2` share a cluster.
    pub th2: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_inner_iters")]
    pub max_inner_iters: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global_iter_budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stagnation_window: Option<usize>,
    #[serde(default)]
    pub strategy: Strategy,
    #[serde(default)]
    pub record_trajectories: bool,
    /// Let the deterministic engine climb data in parallel. Never changes the result.
    #[serde(default = "default_parallel")]
    pub parallel: bool,
}

fn default_max_inner_iters() -> usize {
    DEFAULT_MAX_INNER_ITERS
}

fn default_parallel() -> bool {
    true
}

impl RunConfig {
    pub fn new(h: f64, th1: f64, th2: f64) -> Self {
        Self {
            h,
            th1,
            th2,
            seed: 0,
            max_inner_iters: DEFAULT_MAX_INNER_ITERS,
            global_iter_budget: None,
            stagnation_window: None,
            strategy: Strategy::default(),
            record_trajectories: false,
            parallel: true,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trajectories(mut self, record: bool) -> Self {
        self.record_trajectories = record;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("h", self.h), ("th1", self.th1), ("th2", self.th2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter { name, reason: format!("must be positive and finite, got {v}") });
            }
        }
        let counts = [
            ("max_inner_iters", Some(self.max_inner_iters)),
            ("global_iter_budget", self.global_iter_budget),
            ("stagnation_window", self.stagnation_window),
        ];
        for (name, v) in counts {
            if v == Some(0) {
                return Err(Error::InvalidParameter { name, reason: "must be at least 1".into() });
            }
        }
        Ok(())
    }

    /// Total shift budget for a dataset of `n` points.
    pub fn budget_for(&self, n: usize) -> usize {
        self.global_iter_budget.unwrap_or(DEFAULT_BUDGET_PASSES * n).max(1)
    }

    /// Consecutive small shifts that end a stochastic run on `n` points.
    pub fn window_for(&self, n: usize) -> usize {
        self.stagnation_window.unwrap_or(n).max(1)
    }
}

/// The outcome of one clustering run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult {
    /// Cluster id (`0..Q`) per datum, in input order.
    pub assignments: Vec<usize>,
    /// One representative per cluster: the centroid of its members' final positions.
    pub modes: Vec<Point>,
    pub final_positions: Vec<Point>,
    /// Per-datum position history, starting at the original position.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<Vec<Vec<Point>>>,
    /// Number of single shifts performed.
    pub shift_count: u64,
}

impl ClusteringResult {
    pub fn num_clusters(&self) -> usize {
        self.modes.len()
    }

    /// Structural self-check: every datum assigned to an existing, non-empty
    /// cluster, ids in first-appearance order, one final position (and
    /// trajectory, if recorded) per datum.
    pub fn check_invariants(&self, num_points: usize) -> std::result::Result<(), String> {
        if self.assignments.len() != num_points || self.final_positions.len() != num_points {
            return Err(format!(
                "{} assignments and {} final positions for {num_points} points",
                self.assignments.len(),
                self.final_positions.len()
            ));
        }
        let mut next = 0;
        for &a in &self.assignments {
            if a > next {
                return Err(format!("cluster id {a} appears before id {next}"));
            }
            if a == next {
                next += 1;
            }
        }
        if next != self.modes.len() {
            return Err(format!("{next} clusters used but {} modes reported", self.modes.len()));
        }
        if let Some(t) = &self.trajectories {
            if t.len() != num_points || t.iter().any(Vec::is_empty) {
                return Err("trajectory list does not cover every point".into());
            }
        }
        Ok(())
    }

    fn from_positions(final_positions: Vec<Point>, th2: f64, trajectories: Option<Vec<Vec<Point>>>, shift_count: u64) -> Result<Self> {
        let (assignments, modes) = merge_modes(&final_positions, th2)?;
        Ok(Self { assignments, modes, final_positions, trajectories, shift_count })
    }
}

/// `m_h(x)`: centroid of the closed ball `S_h(x)` over the index, minus `x`.
pub fn mean_shift_vector(index: &NeighborIndex, x: &Point) -> Result<Point> {
    check_dim(index.dim(), x.dim())?;
    let target = neighborhood_mean(index, x.coords()).ok_or(Error::EmptyNeighborhood)?;
    Ok(Point::from_coords_unchecked(target.iter().zip(x.coords()).map(|(t, c)| t - c).collect()))
}

/// Mean of the stored positions within the ball around `x`, or `None` if the ball is empty.
pub(crate) fn neighborhood_mean(index: &NeighborIndex, x: &[f64]) -> Option<Vec<f64>> {
    let mut sum = vec![0.0; x.len()];
    let mut count = 0usize;
    index.for_each_neighbor(x, |_, c| {
        count += 1;
        sum.iter_mut().zip(c).for_each(|(s, v)| *s += v);
    });
    if count == 0 {
        return None;
    }
    let n = count as f64;
    sum.iter_mut().for_each(|s| *s /= n);
    Some(sum)
}

/// One shift from `x`: returns the new position and the norm of the shift taken.
pub(crate) fn shift_once(index: &NeighborIndex, x: &[f64]) -> Result<(Vec<f64>, f64)> {
    let target = neighborhood_mean(index, x).ok_or(Error::EmptyNeighborhood)?;
    let norm = crate::geometry::squared_distance(&target, x).sqrt();
    Ok((target, norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::euclidean_distance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn index(points: &[&[f64]], h: f64) -> NeighborIndex {
        NeighborIndex::new(points.iter().map(|c| p(c)).collect(), h, Strategy::UniformGrid).unwrap()
    }

    #[test]
    fn shift_toward_neighbor_mean() {
        let idx = index(&[&[0.0], &[1.0]], 2.0);
        assert_eq!(mean_shift_vector(&idx, &p(&[0.0])).unwrap(), p(&[0.5]));
    }

    #[test]
    fn isolated_point_does_not_move() {
        let idx = index(&[&[0.0, 0.0], &[5.0, 5.0]], 1.0);
        assert_eq!(mean_shift_vector(&idx, &p(&[5.0, 5.0])).unwrap(), p(&[0.0, 0.0]));
    }

    #[test]
    fn symmetric_star_has_zero_shift() {
        let idx = index(&[&[0.0, 0.0], &[1.0, 0.0], &[-1.0, 0.0], &[0.0, 1.0], &[0.0, -1.0]], 1.5);
        assert_eq!(mean_shift_vector(&idx, &p(&[0.0, 0.0])).unwrap(), p(&[0.0, 0.0]));
    }

    #[test]
    fn empty_neighborhood_is_an_error() {
        let idx = index(&[&[0.0]], 1.0);
        assert_eq!(mean_shift_vector(&idx, &p(&[3.0])), Err(Error::EmptyNeighborhood));
        assert!(matches!(mean_shift_vector(&idx, &p(&[0.0, 0.0])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn matches_filter_and_average_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..20 {
            let xs: Vec<f64> = (0..20).map(|_| rng.random_range(-5.0..5.0)).collect();
            let h = 1.5;
            let idx = NeighborIndex::new(xs.iter().map(|&x| p(&[x])).collect(), h, Strategy::UniformGrid).unwrap();
            let x = xs[trial % xs.len()];
            let inside: Vec<f64> = xs.iter().copied().filter(|v| (v - x).abs() <= h).collect();
            let expected = inside.iter().sum::<f64>() / inside.len() as f64 - x;
            let m = mean_shift_vector(&idx, &p(&[x])).unwrap();
            assert!((m.coords()[0] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_shift_iff_at_neighborhood_centroid() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pts: Vec<Point> = (0..40).map(|_| p(&[rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)])).collect();
        let idx = NeighborIndex::new(pts.clone(), 0.8, Strategy::UniformGrid).unwrap();
        for q in &pts {
            let m = mean_shift_vector(&idx, q).unwrap();
            let members: Vec<Point> = idx.radius_query(q).unwrap().into_iter().map(|i| pts[i].clone()).collect();
            let c = crate::geometry::centroid(&members).unwrap();
            let at_centroid = euclidean_distance(&c, q).unwrap() <= 1e-12;
            assert_eq!(m.norm() <= 1e-12, at_centroid);
        }
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::new(1.0, 1e-3, 0.5).validate().is_ok());
        assert!(RunConfig::new(0.0, 1e-3, 0.5).validate().is_err());
        assert!(RunConfig::new(1.0, -1.0, 0.5).validate().is_err());
        assert!(RunConfig::new(1.0, 1e-3, f64::INFINITY).validate().is_err());
        let mut c = RunConfig::new(1.0, 1e-3, 0.5);
        c.stagnation_window = Some(0);
        assert!(c.validate().is_err());
        let c = RunConfig::new(1.0, 1e-3, 0.5);
        assert_eq!(c.budget_for(30), 3000);
        assert_eq!(c.window_for(30), 30);
    }
}
