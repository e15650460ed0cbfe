//! Virtual rectangular fields and competitive cell allocation.
//!
//! Every room radiates a scalar field from its mass centre. A cell goes to
//! the room whose field is strongest there, provided that field exceeds the
//! activation threshold; otherwise the cell stays free.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::FieldError;
use crate::geometry::Point;
use crate::grid::{CellId, Grid};

/// Rotation at which the rectangular field is upright.
pub const UPRIGHT: f64 = FRAC_PI_4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldShape {
    #[default]
    Rectangular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldParams {
    pub x0: f64,
    pub y0: f64,
    pub m_x: f64,
    pub m_y: f64,
    #[serde(default = "upright")]
    pub t: f64,
    #[serde(default)]
    pub shape: FieldShape,
}

fn upright() -> f64 {
    UPRIGHT
}

impl FieldParams {
    /// Upright rectangular field.
    pub fn new(x0: f64, y0: f64, m_x: f64, m_y: f64) -> Self {
        Self {
            x0,
            y0,
            m_x,
            m_y,
            t: UPRIGHT,
            shape: FieldShape::Rectangular,
        }
    }

    pub fn center(&self) -> Point {
        Point::new(self.x0, self.y0)
    }

    /// Target footprint `m_x * m_y`, m².
    pub fn target_area(&self) -> f64 {
        self.m_x * self.m_y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldConstants {
    /// Activation threshold; a field is active where it strictly exceeds this.
    pub delta: f64,
    /// Positive guard added to the denominator.
    pub epsilon: f64,
}

impl FieldConstants {
    pub const DEFAULT_DELTA: f64 = SQRT_2;
    pub const DEFAULT_EPSILON: f64 = 1e-9;
}

impl Default for FieldConstants {
    fn default() -> Self {
        Self {
            delta: Self::DEFAULT_DELTA,
            epsilon: Self::DEFAULT_EPSILON,
        }
    }
}

/// Field magnitude at `p`:
///
/// ```text
/// x' = m_y (x - x0) cos t - m_x (y - y0) sin t + x0
/// y' = m_y (x - x0) sin t + m_x (y - y0) cos t + y0
/// f  = m_x m_y / (|x' - x0| + |y' - y0| + eps)
/// ```
pub fn field_magnitude(fp: &FieldParams, p: Point, consts: &FieldConstants) -> f64 {
    let FieldShape::Rectangular = fp.shape;
    let dx = p.x - fp.x0;
    let dy = p.y - fp.y0;
    let (sin, cos) = fp.t.sin_cos();
    let xr = fp.m_y * dx * cos - fp.m_x * dy * sin + fp.x0;
    let yr = fp.m_y * dx * sin + fp.m_x * dy * cos + fp.y0;
    fp.m_x * fp.m_y / ((xr - fp.x0).abs() + (yr - fp.y0).abs() + consts.epsilon)
}

/// Half-extents `(h_x, h_y)` of the open rectangle where an upright field is active.
pub fn active_extent(fp: &FieldParams, consts: &FieldConstants) -> Result<(f64, f64), FieldError> {
    if (fp.t - UPRIGHT).abs() > 1e-12 {
        return Err(FieldError::NotUpright(fp.t));
    }
    let reach = fp.m_x * fp.m_y / consts.delta - consts.epsilon;
    Ok((reach / (SQRT_2 * fp.m_y), reach / (SQRT_2 * fp.m_x)))
}

/// Cell ownership produced by [`allocate_cells`].
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    /// Per grid cell: `Some(room)` when owned. Free and outside cells are `None`;
    /// use the grid to tell them apart.
    owner: Vec<Option<usize>>,
    /// Owned cells per room, row-major.
    cells: Vec<Vec<CellId>>,
    cell_size: f64,
}

impl Allocation {
    /// Build from explicit per-room cell lists. Later rooms do not override earlier ones.
    pub fn from_room_cells(grid: &Grid, rooms: Vec<Vec<CellId>>) -> Self {
        let mut owner = vec![None; grid.len()];
        let mut cells = vec![Vec::new(); rooms.len()];
        for (room, list) in rooms.into_iter().enumerate() {
            for id in list {
                if grid.is_inside(id) && owner[id].is_none() {
                    owner[id] = Some(room);
                    cells[room].push(id);
                }
            }
            cells[room].sort_unstable();
        }
        Self {
            owner,
            cells,
            cell_size: grid.cell_size,
        }
    }

    pub fn room_count(&self) -> usize {
        self.cells.len()
    }

    pub fn owner(&self, id: CellId) -> Option<usize> {
        self.owner.get(id).copied().flatten()
    }

    pub fn room_cells(&self, room: usize) -> &[CellId] {
        &self.cells[room]
    }

    pub fn is_free(&self, grid: &Grid, id: CellId) -> bool {
        grid.is_inside(id) && self.owner(id).is_none()
    }

    pub fn free_cells<'a>(&'a self, grid: &'a Grid) -> impl Iterator<Item = CellId> + 'a {
        grid.inside_cells()
            .iter()
            .copied()
            .filter(move |&id| self.owner[id].is_none())
    }

    /// `a_i = |cells_i| * s²`.
    pub fn room_area(&self, room: usize) -> f64 {
        self.cells[room].len() as f64 * self.cell_size * self.cell_size
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    /// Number of 4-connected components of each room.
    pub fn component_counts(&self, grid: &Grid) -> Vec<usize> {
        (0..self.room_count())
            .map(|r| self.components(grid, r).len())
            .collect()
    }

    /// 4-connected components of a room, each row-major, ordered by first cell.
    pub fn components(&self, grid: &Grid, room: usize) -> Vec<Vec<CellId>> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.cells[room] {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(c) = stack.pop() {
                for n in grid.neighbors(c) {
                    if self.owner[n] == Some(room) && seen.insert(n) {
                        comp.push(n);
                        stack.push(n);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Assign each inside cell to the room with the strongest active field.
/// Ties go to the lowest room index; cells with no active field stay free.
pub fn allocate_cells(grid: &Grid, fields: &[FieldParams], consts: &FieldConstants) -> Allocation {
    let mut owner = vec![None; grid.len()];
    let mut cells = vec![Vec::new(); fields.len()];
    for &id in grid.inside_cells() {
        let p = grid.center(id);
        let mut best: Option<(usize, f64)> = None;
        for (room, fp) in fields.iter().enumerate() {
            let f = field_magnitude(fp, p, consts);
            if f > consts.delta && best.is_none_or(|(_, b)| f > b) {
                best = Some((room, f));
            }
        }
        if let Some((room, _)) = best {
            owner[id] = Some(room);
            cells[room].push(id);
        }
    }
    Allocation {
        owner,
        cells,
        cell_size: grid.cell_size,
    }
}

/// Room cells with at least one 4-neighbour owned by something else
/// (another room, nobody, or outside the envelope).
pub fn room_boundary_cells(alloc: &Allocation, room: usize, grid: &Grid) -> Vec<CellId> {
    alloc
        .room_cells(room)
        .iter()
        .copied()
        .filter(|&id| is_boundary_cell(alloc, grid, id))
        .collect()
}

pub(crate) fn is_boundary_cell(alloc: &Allocation, grid: &Grid, id: CellId) -> bool {
    let Some(room) = alloc.owner(id) else {
        return false;
    };
    crate::grid::Direction::ALL
        .into_iter()
        .any(|d| grid.neighbor(id, d).is_none_or(|n| alloc.owner(n) != Some(room)))
}
