//! Fitness values of a decoded layout. Everything is minimisation-oriented.

use serde::{Deserialize, Serialize};

use crate::circulation::{corridor_metrics, CirculationPattern};
use crate::error::EvaluationError;
use crate::field::{Allocation, FieldParams};
use crate::geometry::{ring_edges, strictly_inside, Point, Segment};
use crate::grid::{CellId, Grid};
use crate::spec::{DesignSpec, Objective};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub labels: Vec<Objective>,
    pub values: Vec<f64>,
}

impl ObjectiveVector {
    pub fn get(&self, objective: Objective) -> Option<f64> {
        self.labels
            .iter()
            .position(|&o| o == objective)
            .map(|i| self.values[i])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `A = sum_i |cells_i| s²`.
pub fn internal_area(alloc: &Allocation) -> f64 {
    (0..alloc.room_count()).map(|r| alloc.room_area(r)).fold(0.0, |acc, x| acc + x)
}

/// `C = sum_i (m_xi m_yi - a_i)²`.
pub fn conflict_area(fields: &[FieldParams], alloc: &Allocation) -> f64 {
    fields
        .iter()
        .enumerate()
        .map(|(i, fp)| {
            let gap = fp.target_area() - alloc.room_area(i);
            gap * gap
        })
        .fold(0.0, |acc, x| acc + x)
}

/// Unlit habitable area under the 2D ray model, summed over `lights`.
///
/// A habitable cell is lit by a light travelling along `light` when a ray
/// marched from its centre against the light, in steps of half a cell, leaves
/// the envelope through a window having stayed inside the cell's own room.
pub fn shadow_area(
    alloc: &Allocation,
    grid: &Grid,
    spec: &DesignSpec,
    lights: &[Point],
) -> Result<f64, EvaluationError> {
    let windows = spec.window_segments();
    let edges: Vec<Segment> = ring_edges(&spec.envelope).collect();
    let s = grid.cell_size;
    let mut unlit = 0usize;
    for &light in lights {
        let len = light.x.hypot(light.y);
        if !(len > 0.0 && len.is_finite()) {
            return Err(EvaluationError::ZeroLight);
        }
        let back = Point::new(-light.x / len, -light.y / len);
        for (room, spec_room) in spec.rooms.iter().enumerate() {
            if !spec_room.is_habitable() || room >= alloc.room_count() {
                continue;
            }
            unlit += alloc
                .room_cells(room)
                .iter()
                .filter(|&&c| !cell_lit(alloc, grid, spec, &edges, &windows, room, c, back))
                .count();
        }
    }
    Ok(unlit as f64 * s * s)
}

#[allow(clippy::too_many_arguments)]
fn cell_lit(
    alloc: &Allocation,
    grid: &Grid,
    spec: &DesignSpec,
    edges: &[Segment],
    windows: &[Segment],
    room: usize,
    cell: CellId,
    back: Point,
) -> bool {
    let step = grid.cell_size / 2.0;
    let origin = grid.center(cell);
    let span = (grid.columns + grid.rows) as f64 * grid.cell_size;
    let max_steps = (span / step).ceil() as usize + 4;
    let mut prev = origin;
    for k in 1..=max_steps {
        let p = Point::new(
            origin.x + k as f64 * step * back.x,
            origin.y + k as f64 * step * back.y,
        );
        if !strictly_inside(&spec.envelope, p) {
            let exit = edges
                .iter()
                .filter_map(|e| e.intersect_param(prev, p))
                .min_by(f64::total_cmp)
                .unwrap_or(1.0);
            let q = Point::new(prev.x + exit * (p.x - prev.x), prev.y + exit * (p.y - prev.y));
            return windows.iter().any(|w| w.contains(q));
        }
        match grid.locate(p) {
            Some(c) if alloc.owner(c) == Some(room) => {}
            _ => return false,
        }
        prev = p;
    }
    false
}

/// Graded adjacency: 0 for a pair sharing a cell edge, otherwise the distance
/// between the two mass centres.
pub fn adjacency_distance(
    alloc: &Allocation,
    grid: &Grid,
    fields: &[FieldParams],
    pairs: &[[usize; 2]],
) -> f64 {
    pairs
        .iter()
        .map(|&[i, j]| {
            if rooms_touch(alloc, grid, i, j) {
                0.0
            } else {
                fields[i].center().distance(fields[j].center())
            }
        })
        .fold(0.0, |acc, x| acc + x)
}

pub fn rooms_touch(alloc: &Allocation, grid: &Grid, i: usize, j: usize) -> bool {
    alloc
        .room_cells(i)
        .iter()
        .any(|&c| grid.neighbors(c).any(|n| alloc.owner(n) == Some(j)))
}

/// Every raw score of a layout; `shadow` is only computed when requested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutScores {
    pub internal_area: f64,
    pub conflict: f64,
    pub circulation_area: f64,
    pub shadow: Option<f64>,
    pub adjacency: f64,
    pub unreachable_rooms: Vec<usize>,
}

pub fn score_layout(
    spec: &DesignSpec,
    grid: &Grid,
    fields: &[FieldParams],
    alloc: &Allocation,
    pattern: &CirculationPattern,
) -> Result<LayoutScores, EvaluationError> {
    let shadow = if spec.objectives.contains(&Objective::Shadow) {
        Some(shadow_area(alloc, grid, spec, &spec.light_directions)?)
    } else {
        None
    };
    Ok(LayoutScores {
        internal_area: internal_area(alloc),
        conflict: conflict_area(fields, alloc),
        circulation_area: corridor_metrics(pattern, spec, grid).area,
        shadow,
        adjacency: adjacency_distance(alloc, grid, fields, &spec.adjacency),
        unreachable_rooms: pattern.unreachable_rooms(),
    })
}

impl LayoutScores {
    /// Project onto `objectives`, in that order.
    pub fn objective_vector(&self, objectives: &[Objective]) -> ObjectiveVector {
        let values = objectives
            .iter()
            .map(|o| match o {
                Objective::AreaMinusConflict => self.conflict - self.internal_area,
                Objective::Circulation => self.circulation_area,
                Objective::Shadow => self.shadow.unwrap_or(0.0),
                Objective::Adjacency => self.adjacency,
            })
            .collect();
        ObjectiveVector {
            labels: objectives.to_vec(),
            values,
        }
    }
}

pub fn evaluate_layout(
    spec: &DesignSpec,
    grid: &Grid,
    fields: &[FieldParams],
    alloc: &Allocation,
    pattern: &CirculationPattern,
) -> Result<ObjectiveVector, EvaluationError> {
    Ok(score_layout(spec, grid, fields, alloc, pattern)?.objective_vector(&spec.objectives))
}
