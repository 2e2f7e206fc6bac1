use super::{shift_once, ClusteringResult, RunConfig};
use crate::error::Result;
use crate::geometry::{Dataset, Point};
use crate::neighbors::NeighborIndex;
use crate::rng::{seeded, uniform_index};

/// Stochastic mean-shift.
///
/// Each step draws a datum uniformly with replacement, shifts it once by the
/// mean-shift vector computed over the *current* positions of all data, and
/// leaves it there. The run stops after `stagnation_window` consecutive
/// shifts of norm `<= th1`, or when `global_iter_budget` shifts are spent.
/// Output is a pure function of `(data, config)`.
pub fn cluster_stochastic(data: &Dataset, config: &RunConfig) -> Result<ClusteringResult> {
    config.validate()?;
    let n = data.len();
    let budget = config.budget_for(n);
    let window = config.window_for(n);

    let mut index = NeighborIndex::new(data.points().to_vec(), config.h, config.strategy)?;
    let mut paths: Option<Vec<Vec<Point>>> =
        config.record_trajectories.then(|| data.points().iter().map(|p| vec![p.clone()]).collect());
    let mut rng = seeded(config.seed);

    let mut shifts = 0usize;
    let mut quiet_run = 0usize;
    while shifts < budget && quiet_run < window {
        let j = uniform_index(&mut rng, n);
        let current = index.position(j).expect("drawn index is in range").coords().to_vec();
        let (next, norm) = shift_once(&index, &current)?;
        let next = Point::from_coords_unchecked(next);
        if let Some(paths) = &mut paths {
            paths[j].push(next.clone());
        }
        index.update_position(j, next)?;
        shifts += 1;
        quiet_run = if norm <= config.th1 { quiet_run + 1 } else { 0 };
    }

    ClusteringResult::from_positions(index.into_positions(), config.th2, paths, shifts as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::euclidean_distance;

    fn two_groups() -> Dataset {
        let offsets = [-0.1, -0.05, 0.0, 0.05, 0.1];
        let mut rows = Vec::new();
        for center in [0.0, 10.0] {
            for (k, o) in offsets.iter().enumerate() {
                rows.push(vec![center + o, offsets[(k + 2) % 5]]);
            }
        }
        Dataset::from_rows(rows).unwrap()
    }

    #[test]
    fn single_point_stops_after_window() {
        let data = Dataset::from_rows(vec![vec![1.0, 2.0]]).unwrap();
        let r = cluster_stochastic(&data, &RunConfig::new(1.0, 1e-6, 0.5)).unwrap();
        assert_eq!(r.assignments, vec![0]);
        assert_eq!(r.shift_count, 1);
        let mut config = RunConfig::new(1.0, 1e-6, 0.5);
        config.stagnation_window = Some(7);
        assert_eq!(cluster_stochastic(&data, &config).unwrap().shift_count, 7);
    }

    #[test]
    fn seeded_runs_are_identical() {
        let data = two_groups();
        let config = RunConfig::new(1.0, 1e-6, 1.0).with_seed(17).with_trajectories(true);
        let a = cluster_stochastic(&data, &config).unwrap();
        let b = cluster_stochastic(&data, &config).unwrap();
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn far_groups_stay_intact_for_many_seeds() {
        let data = two_groups();
        for seed in 0..10 {
            let r = cluster_stochastic(&data, &RunConfig::new(1.0, 1e-6, 1.0).with_seed(seed)).unwrap();
            assert_eq!(r.num_clusters(), 2, "seed {seed}");
            assert!(r.assignments[..5].iter().all(|&a| a == 0));
            assert!(r.assignments[5..].iter().all(|&a| a == 1));
        }
    }

    #[test]
    fn budget_caps_the_run() {
        let data = Dataset::from_rows((0..40).map(|i| vec![i as f64 * 0.1]).collect()).unwrap();
        let mut config = RunConfig::new(0.35, 1e-12, 0.01).with_seed(3);
        config.global_iter_budget = Some(25);
        let r = cluster_stochastic(&data, &config).unwrap();
        assert_eq!(r.shift_count, 25);
    }

    #[test]
    fn positions_move_against_live_data() {
        let data = Dataset::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        let r = cluster_stochastic(&data, &RunConfig::new(1.5, 1e-9, 0.01).with_seed(0).with_trajectories(true)).unwrap();
        // after the first draw both sit within reach of each other; all later shifts pull them together
        assert!(euclidean_distance(&r.final_positions[0], &r.final_positions[1]).unwrap() <= 1e-9);
        assert_eq!(r.num_clusters(), 1);
        let paths = r.trajectories.unwrap();
        let moved: usize = paths.iter().map(|p| p.len() - 1).sum();
        assert_eq!(moved as u64, r.shift_count);
    }
}
