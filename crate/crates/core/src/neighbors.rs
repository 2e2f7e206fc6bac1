//! Closed-ball radius queries over a mutable set of positions.
//!
//! Two interchangeable strategies return exactly the same index sets: a
//! linear scan, and a uniform grid of cubic cells keyed by integer
//! coordinates. A grid query only visits the `3^d` cells around the query's
//! own cell, so the cell side must be at least the bandwidth.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_dim, squared_distance, Point};

/// Dimension above which the grid degrades to a linear scan (`3^d` cells per query).
pub const MAX_GRID_DIM: usize = 6;

/// Relative inflation of the grid cell side over the bandwidth. Keeps
/// floating-point rounding at the ball boundary from placing a true
/// neighbor two cells away from the query.
const CELL_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Naive,
    #[default]
    UniformGrid,
}

type CellKey = [i64; MAX_GRID_DIM];

#[derive(Debug, Clone)]
struct Grid {
    inv_side: f64,
    cells: HashMap<CellKey, Vec<usize>>,
    cell_of: Vec<CellKey>,
}

impl Grid {
    fn build(positions: &[Point], side: f64) -> Self {
        let mut grid = Grid { inv_side: 1.0 / side, cells: HashMap::new(), cell_of: Vec::with_capacity(positions.len()) };
        for (i, p) in positions.iter().enumerate() {
            let key = grid.key(p.coords());
            grid.cells.entry(key).or_default().push(i);
            grid.cell_of.push(key);
        }
        grid
    }

    fn key(&self, coords: &[f64]) -> CellKey {
        let mut key = [0i64; MAX_GRID_DIM];
        for (k, c) in key.iter_mut().zip(coords) {
            *k = (c * self.inv_side).floor() as i64;
        }
        key
    }

    fn relocate(&mut self, i: usize, coords: &[f64]) {
        let new_key = self.key(coords);
        let old_key = self.cell_of[i];
        if new_key == old_key {
            return;
        }
        if let Some(members) = self.cells.get_mut(&old_key) {
            if let Some(slot) = members.iter().position(|&m| m == i) {
                members.swap_remove(slot);
            }
            if members.is_empty() {
                self.cells.remove(&old_key);
            }
        }
        self.cells.entry(new_key).or_default().push(i);
        self.cell_of[i] = new_key;
    }

    /// Calls `visit` with the members of every cell adjacent to (or equal to) the query's cell.
    fn for_each_candidate_cell(&self, coords: &[f64], mut visit: impl FnMut(&[usize])) {
        let dim = coords.len();
        let center = self.key(coords);
        let mut offset = [-1i64; MAX_GRID_DIM];
        loop {
            let mut key = [0i64; MAX_GRID_DIM];
            for k in 0..dim {
                key[k] = center[k] + offset[k];
            }
            if let Some(members) = self.cells.get(&key) {
                visit(members);
            }
            // odometer over {-1, 0, 1}^dim
            let mut k = 0;
            loop {
                if k == dim {
                    return;
                }
                if offset[k] < 1 {
                    offset[k] += 1;
                    break;
                }
                offset[k] = -1;
                k += 1;
            }
        }
    }
}

/// Positions indexed by stable datum id, answering `S_h(x) = { i : ‖x − pos(i)‖ ≤ h }`.
#[derive(Debug, Clone)]
pub struct NeighborIndex {
    positions: Vec<Point>,
    dim: usize,
    bandwidth: f64,
    grid: Option<Grid>,
}

impl NeighborIndex {
    /// Indexes `positions` at bandwidth `h`. The grid strategy silently falls
    /// back to a linear scan above [`MAX_GRID_DIM`] dimensions.
    pub fn new(positions: Vec<Point>, h: f64, strategy: Strategy) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter { name: "h", reason: format!("must be positive and finite, got {h}") });
        }
        let dim = positions.first().ok_or(Error::Empty("neighbor index"))?.dim();
        for p in &positions {
            check_dim(dim, p.dim())?;
        }
        let grid = match strategy {
            Strategy::UniformGrid if dim <= MAX_GRID_DIM => Some(Grid::build(&positions, h * (1.0 + CELL_SLACK))),
            _ => None,
        };
        Ok(Self { positions, dim, bandwidth: h, grid })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// The strategy actually in use, after any high-dimension fallback.
    pub fn strategy(&self) -> Strategy {
        if self.grid.is_some() {
            Strategy::UniformGrid
        } else {
            Strategy::Naive
        }
    }

    pub fn position(&self, i: usize) -> Option<&Point> {
        self.positions.get(i)
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn into_positions(self) -> Vec<Point> {
        self.positions
    }

    /// Sorted ids of every stored position within distance `h` of `x` (closed ball).
    pub fn radius_query(&self, x: &Point) -> Result<Vec<usize>> {
        check_dim(self.dim, x.dim())?;
        let mut hits = Vec::new();
        self.for_each_neighbor(x.coords(), |i, _| hits.push(i));
        hits.sort_unstable();
        Ok(hits)
    }

    /// Moves datum `i` to `p`; later queries see the new position.
    pub fn update_position(&mut self, i: usize, p: Point) -> Result<()> {
        let len = self.positions.len();
        if i >= len {
            return Err(Error::IndexOutOfRange { index: i, len });
        }
        check_dim(self.dim, p.dim())?;
        if let Some(grid) = &mut self.grid {
            grid.relocate(i, p.coords());
        }
        self.positions[i] = p;
        Ok(())
    }

    /// Visits every `(id, position)` inside the closed ball around `x`, in an
    /// order fixed by the strategy and the index's update history.
    /// `x` must already have the index's dimension.
    pub(crate) fn for_each_neighbor(&self, x: &[f64], mut visit: impl FnMut(usize, &[f64])) {
        debug_assert_eq!(x.len(), self.dim);
        let h2 = self.bandwidth * self.bandwidth;
        let mut test = |i: usize| {
            let c = self.positions[i].coords();
            if squared_distance(x, c) <= h2 {
                visit(i, c);
            }
        };
        match &self.grid {
            Some(grid) => grid.for_each_candidate_cell(x, |members| members.iter().for_each(|&i| test(i))),
            None => (0..self.positions.len()).for_each(test),
        }
    }
}
