//! Uniform cell decomposition of the envelope interior.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::GridError;
use crate::geometry::{bounding_box, on_boundary, ring_edges, strictly_inside, Point};
use crate::spec::DesignSpec;

/// Row-major cell index over the full bounding grid (`row * columns + col`).
pub type CellId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    South,
    West,
    East,
    North,
}

impl Direction {
    /// Ordered so that neighbours come out in ascending cell index.
    pub const ALL: [Direction; 4] = [
        Direction::South,
        Direction::West,
        Direction::East,
        Direction::North,
    ];

    pub fn offset(self) -> (isize, isize) {
        match self {
            Direction::South => (0, -1),
            Direction::West => (-1, 0),
            Direction::East => (1, 0),
            Direction::North => (0, 1),
        }
    }
}

/// Envelope edge touched by an outward cell face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallFace {
    pub edge: usize,
    pub window: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub origin: Point,
    pub cell_size: f64,
    pub columns: usize,
    pub rows: usize,
    inside: Vec<bool>,
    inside_cells: Vec<CellId>,
    /// For perimeter cells: per direction (in [`Direction::ALL`] order), the
    /// envelope edge the outward face looks onto.
    boundary: BTreeMap<CellId, [Option<WallFace>; 4]>,
}

/// Decompose the envelope interior; a cell belongs to the grid iff its centre
/// is strictly inside the envelope.
pub fn build_grid(spec: &DesignSpec) -> Result<Grid, GridError> {
    build_grid_with_cell_size(spec, spec.cell_size)
}

pub fn build_grid_with_cell_size(spec: &DesignSpec, cell_size: f64) -> Result<Grid, GridError> {
    let (lo, hi) = bounding_box(&spec.envelope);
    let columns = cell_count(hi.x - lo.x, cell_size);
    let rows = cell_count(hi.y - lo.y, cell_size);
    let mut grid = Grid {
        origin: lo,
        cell_size,
        columns,
        rows,
        inside: vec![false; columns * rows],
        inside_cells: Vec::new(),
        boundary: BTreeMap::new(),
    };
    for id in 0..columns * rows {
        let c = grid.center_unchecked(id);
        if strictly_inside(&spec.envelope, c) {
            grid.inside[id] = true;
            grid.inside_cells.push(id);
        }
    }
    if grid.inside_cells.is_empty() {
        return Err(GridError::Empty { cell_size });
    }

    let windows = spec.window_segments();
    let edges: Vec<_> = ring_edges(&spec.envelope).collect();
    for &id in &grid.inside_cells {
        let mut faces = [None; 4];
        let mut perimeter = false;
        for (k, dir) in Direction::ALL.into_iter().enumerate() {
            if grid.neighbor(id, dir).is_some() {
                continue;
            }
            perimeter = true;
            let c = grid.center_unchecked(id);
            let (dx, dy) = dir.offset();
            let reach = Point::new(c.x + dx as f64 * cell_size, c.y + dy as f64 * cell_size);
            let hit = edges
                .iter()
                .enumerate()
                .filter_map(|(e, seg)| seg.intersect_param(c, reach).map(|t| (t, e)))
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            if let Some((t, e)) = hit {
                let p = Point::new(c.x + t * (reach.x - c.x), c.y + t * (reach.y - c.y));
                faces[k] = Some(WallFace {
                    edge: e,
                    window: windows.iter().any(|w| w.contains(p)),
                });
            }
        }
        if perimeter {
            grid.boundary.insert(id, faces);
        }
    }
    Ok(grid)
}

fn cell_count(extent: f64, cell_size: f64) -> usize {
    ((extent / cell_size) - 1e-9).ceil().max(0.0) as usize
}

impl Grid {
    pub fn len(&self) -> usize {
        self.columns * self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of inside cells, `N`.
    pub fn inside_count(&self) -> usize {
        self.inside_cells.len()
    }

    /// Inside cells in row-major order.
    pub fn inside_cells(&self) -> &[CellId] {
        &self.inside_cells
    }

    pub fn is_inside(&self, id: CellId) -> bool {
        self.inside.get(id).copied().unwrap_or(false)
    }

    pub fn id(&self, col: usize, row: usize) -> Result<CellId, GridError> {
        if col >= self.columns || row >= self.rows {
            return Err(GridError::OutOfRange {
                col,
                row,
                columns: self.columns,
                rows: self.rows,
            });
        }
        Ok(row * self.columns + col)
    }

    pub fn col_row(&self, id: CellId) -> (usize, usize) {
        (id % self.columns, id / self.columns)
    }

    /// Centre of cell `(col, row)`: `origin + (col + 0.5, row + 0.5) * s`.
    pub fn cell_center(&self, col: usize, row: usize) -> Result<Point, GridError> {
        let id = self.id(col, row)?;
        Ok(self.center_unchecked(id))
    }

    pub fn center(&self, id: CellId) -> Point {
        self.center_unchecked(id)
    }

    fn center_unchecked(&self, id: CellId) -> Point {
        let (col, row) = (id % self.columns, id / self.columns);
        Point::new(
            self.origin.x + (col as f64 + 0.5) * self.cell_size,
            self.origin.y + (row as f64 + 0.5) * self.cell_size,
        )
    }

    /// Inside neighbour in `dir`, if any.
    pub fn neighbor(&self, id: CellId, dir: Direction) -> Option<CellId> {
        let (col, row) = self.col_row(id);
        let (dx, dy) = dir.offset();
        let c = col as isize + dx;
        let r = row as isize + dy;
        if c < 0 || r < 0 || c as usize >= self.columns || r as usize >= self.rows {
            return None;
        }
        let n = r as usize * self.columns + c as usize;
        self.inside[n].then_some(n)
    }

    pub fn neighbors(&self, id: CellId) -> impl Iterator<Item = CellId> + '_ {
        Direction::ALL
            .into_iter()
            .filter_map(move |d| self.neighbor(id, d))
    }

    /// Cell containing point `p`, whether inside or not.
    pub fn locate(&self, p: Point) -> Option<CellId> {
        let fx = ((p.x - self.origin.x) / self.cell_size).floor();
        let fy = ((p.y - self.origin.y) / self.cell_size).floor();
        if fx < 0.0 || fy < 0.0 || fx >= self.columns as f64 || fy >= self.rows as f64 {
            return None;
        }
        Some(fy as usize * self.columns + fx as usize)
    }

    /// Perimeter cells (inside cells with an outward face), row-major.
    pub fn perimeter_cells(&self) -> impl Iterator<Item = CellId> + '_ {
        self.boundary.keys().copied()
    }

    /// Outward faces of a perimeter cell, in [`Direction::ALL`] order.
    pub fn wall_faces(&self, id: CellId) -> Option<&[Option<WallFace>; 4]> {
        self.boundary.get(&id)
    }

    /// Lower-left and upper-right corners of a cell.
    pub fn cell_bounds(&self, id: CellId) -> (Point, Point) {
        let (col, row) = self.col_row(id);
        let s = self.cell_size;
        let lo = Point::new(
            self.origin.x + col as f64 * s,
            self.origin.y + row as f64 * s,
        );
        (lo, Point::new(lo.x + s, lo.y + s))
    }
}

/// Snap each entrance candidate to the nearest perimeter cell; sorted row-major, deduplicated.
pub fn entrance_candidate_cells(spec: &DesignSpec, grid: &Grid) -> Result<Vec<CellId>, GridError> {
    let mut out = Vec::with_capacity(spec.entrances.len());
    for (index, &p) in spec.entrances.iter().enumerate() {
        let unmapped = GridError::UnmappedEntrance {
            index,
            x: p.x,
            y: p.y,
        };
        if !on_boundary(&spec.envelope, p) {
            return Err(unmapped);
        }
        let best = grid
            .perimeter_cells()
            .map(|id| (square_distance(grid, id, p), id))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        match best {
            Some((d, id)) if d <= grid.cell_size => out.push(id),
            _ => return Err(unmapped),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn square_distance(grid: &Grid, id: CellId, p: Point) -> f64 {
    let (lo, hi) = grid.cell_bounds(id);
    let dx = (lo.x - p.x).max(0.0).max(p.x - hi.x);
    let dy = (lo.y - p.y).max(0.0).max(p.y - hi.y);
    dx.hypot(dy)
}
