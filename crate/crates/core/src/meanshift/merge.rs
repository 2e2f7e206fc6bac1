use std::collections::HashMap;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::geometry::{check_dim, centroid, Point};
use crate::neighbors::{NeighborIndex, Strategy};

/// Single-linkage merge of converged positions.
///
/// Positions within `th2` of each other are linked, and clusters are the
/// connected components of that graph, so chains merge even when their ends
/// are far apart. Cluster ids follow the order in which each cluster's first
/// member appears. Each mode is the centroid of its cluster's positions.
pub fn merge_modes(positions: &[Point], th2: f64) -> Result<(Vec<usize>, Vec<Point>)> {
    if !(th2 > 0.0 && th2.is_finite()) {
        return Err(Error::InvalidParameter { name: "th2", reason: format!("must be positive and finite, got {th2}") });
    }
    let dim = positions.first().ok_or(Error::Empty("positions to merge"))?.dim();
    for p in positions {
        check_dim(dim, p.dim())?;
    }

    // Converged runs pile many data onto bit-identical spots; link those once.
    let mut slot_of_bits: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut distinct = Vec::new();
    let slots: Vec<usize> = positions
        .iter()
        .map(|p| {
            let bits = p.coords().iter().map(|c| (c + 0.0).to_bits()).collect();
            *slot_of_bits.entry(bits).or_insert_with(|| {
                distinct.push(p.clone());
                distinct.len() - 1
            })
        })
        .collect();

    let index = NeighborIndex::new(distinct, th2, Strategy::UniformGrid)?;
    let mut components = UnionFind::<usize>::new(index.len());
    for (i, p) in index.positions().iter().enumerate() {
        index.for_each_neighbor(p.coords(), |j, _| {
            if j > i {
                components.union(i, j);
            }
        });
    }

    let mut cluster_of_root: HashMap<usize, usize> = HashMap::new();
    let assignments: Vec<usize> = slots
        .iter()
        .map(|&s| {
            let next = cluster_of_root.len();
            *cluster_of_root.entry(components.find(s)).or_insert(next)
        })
        .collect();

    let mut members: Vec<Vec<Point>> = vec![Vec::new(); cluster_of_root.len()];
    for (p, &c) in positions.iter().zip(&assignments) {
        members[c].push(p.clone());
    }
    let modes = members.iter().map(|m| centroid(m)).collect::<Result<_>>()?;
    Ok((assignments, modes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::euclidean_distance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(xs: &[f64]) -> Vec<Point> {
        xs.iter().map(|&x| Point::new(vec![x]).unwrap()).collect()
    }

    /// Oracle: flood fill over the explicit all-pairs graph, labelling components in first-appearance order.
    fn components_by_flood_fill(positions: &[Point], th2: f64) -> Vec<usize> {
        let n = positions.len();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = next;
            while let Some(u) = stack.pop() {
                for v in 0..n {
                    if label[v] == usize::MAX && euclidean_distance(&positions[u], &positions[v]).unwrap() <= th2 {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    #[test]
    fn gap_separates_clusters() {
        let (a, modes) = merge_modes(&line(&[0.0, 0.1, 5.0]), 0.5).unwrap();
        assert_eq!(a, vec![0, 0, 1]);
        assert!((modes[0].coords()[0] - 0.05).abs() < 1e-15);
        assert_eq!(modes[1].coords(), &[5.0]);
    }

    #[test]
    fn chains_merge_transitively() {
        let (a, modes) = merge_modes(&line(&[0.0, 0.4, 0.8]), 0.5).unwrap();
        assert_eq!(a, vec![0, 0, 0]);
        assert_eq!(modes.len(), 1);
    }

    #[test]
    fn ids_follow_first_appearance() {
        let (a, _) = merge_modes(&line(&[9.0, 0.0, 9.1, 4.0, 0.2]), 0.5).unwrap();
        assert_eq!(a, vec![0, 1, 0, 2, 1]);
    }

    #[test]
    fn duplicates_and_negative_zero_collapse() {
        let (a, modes) = merge_modes(&line(&[0.0, -0.0, 0.0, 3.0]), 1e-9).unwrap();
        assert_eq!(a, vec![0, 0, 0, 1]);
        assert_eq!(modes.len(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(merge_modes(&[], 1.0).is_err());
        assert!(merge_modes(&line(&[0.0]), 0.0).is_err());
    }

    #[test]
    fn matches_all_pairs_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let positions: Vec<Point> = (0..50)
                .map(|_| Point::new(vec![rng.random_range(0.0..4.0), rng.random_range(0.0..4.0)]).unwrap())
                .collect();
            let th2 = rng.random_range(0.05..0.8);
            let (a, modes) = merge_modes(&positions, th2).unwrap();
            assert_eq!(a, components_by_flood_fill(&positions, th2));
            assert_eq!(modes.len(), a.iter().max().unwrap() + 1);
        }
    }
}
