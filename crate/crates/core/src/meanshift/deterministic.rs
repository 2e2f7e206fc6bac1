use rayon::prelude::*;

use super::{shift_once, ClusteringResult, RunConfig};
use crate::error::Result;
use crate::geometry::{Dataset, Point};
use crate::neighbors::NeighborIndex;

struct Climb {
    end: Point,
    path: Option<Vec<Point>>,
    shifts: u64,
}

/// Climbs one datum against the frozen index until a shift of norm `<= th1`
/// has been taken or `max_inner_iters` shifts are spent.
fn climb(index: &NeighborIndex, start: &Point, config: &RunConfig) -> Result<Climb> {
    let mut x = start.coords().to_vec();
    let mut path = config.record_trajectories.then(|| vec![start.clone()]);
    let mut shifts = 0u64;
    for _ in 0..config.max_inner_iters {
        let (next, norm) = shift_once(index, &x)?;
        x = next;
        shifts += 1;
        if let Some(path) = &mut path {
            path.push(Point::from_coords_unchecked(x.clone()));
        }
        if norm <= config.th1 {
            break;
        }
    }
    Ok(Climb { end: Point::from_coords_unchecked(x), path, shifts })
}

/// Classic mean-shift: every datum climbs separately against the original
/// positions, which never move. The result does not depend on input order
/// beyond cluster numbering, nor on `config.parallel`.
pub fn cluster_deterministic(data: &Dataset, config: &RunConfig) -> Result<ClusteringResult> {
    config.validate()?;
    let index = NeighborIndex::new(data.points().to_vec(), config.h, config.strategy)?;
    let climbs: Vec<Climb> = if config.parallel {
        data.points().par_iter().map(|p| climb(&index, p, config)).collect::<Result<_>>()?
    } else {
        data.points().iter().map(|p| climb(&index, p, config)).collect::<Result<_>>()?
    };

    let shift_count = climbs.iter().map(|c| c.shifts).sum();
    let mut ends = Vec::with_capacity(climbs.len());
    let mut paths = config.record_trajectories.then(|| Vec::with_capacity(climbs.len()));
    for c in climbs {
        ends.push(c.end);
        if let (Some(paths), Some(path)) = (&mut paths, c.path) {
            paths.push(path);
        }
    }
    ClusteringResult::from_positions(ends, config.th2, paths, shift_count)
}
