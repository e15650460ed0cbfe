//! Rectilinear outlines traced around cell sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::geometry::{signed_area, Point};
use crate::grid::{CellId, Grid};

/// Outer ring (counterclockwise) followed by any holes (clockwise).
pub type Polygon = Vec<Vec<Point>>;

type Vertex = (i64, i64);

/// Trace one set of 4-connected cells into rings of lattice vertices.
fn trace_lattice(grid: &Grid, cells: &[CellId]) -> Vec<Vec<Vertex>> {
    let set: BTreeSet<(i64, i64)> = cells
        .iter()
        .map(|&c| {
            let (col, row) = grid.col_row(c);
            (col as i64, row as i64)
        })
        .collect();
    // counterclockwise boundary edges, interior on the left
    let mut out: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &(c, r) in &set {
        let faces = [
            ((c, r - 1), (c, r), (c + 1, r)),
            ((c + 1, r), (c + 1, r), (c + 1, r + 1)),
            ((c, r + 1), (c + 1, r + 1), (c, r + 1)),
            ((c - 1, r), (c, r + 1), (c, r)),
        ];
        for (neighbour, a, b) in faces {
            if !set.contains(&neighbour) {
                out.entry(a).or_default().push(b);
            }
        }
    }
    let mut rings = Vec::new();
    while let Some((&start, _)) = out.iter().find(|(_, v)| !v.is_empty()) {
        let mut ring = vec![start];
        let mut prev = start;
        let mut cur = take_edge(&mut out, start, None);
        while cur != start {
            ring.push(cur);
            let dir = (cur.0 - prev.0, cur.1 - prev.1);
            let next = take_edge(&mut out, cur, Some(dir));
            prev = cur;
            cur = next;
        }
        rings.push(simplify(ring));
    }
    rings
}

/// Follow an unused edge out of `v`; at pinch vertices turn left first.
fn take_edge(out: &mut BTreeMap<Vertex, Vec<Vertex>>, v: Vertex, incoming: Option<(i64, i64)>) -> Vertex {
    let options = out.get_mut(&v).expect("boundary edges form closed loops");
    let pick = match incoming {
        Some((dx, dy)) if options.len() > 1 => {
            let preference = [(-dy, dx), (dx, dy), (dy, -dx)];
            preference
                .iter()
                .find_map(|d| options.iter().position(|w| (w.0 - v.0, w.1 - v.1) == *d))
                .unwrap_or(0)
        }
        _ => 0,
    };
    options.remove(pick)
}

fn simplify(ring: Vec<Vertex>) -> Vec<Vertex> {
    let n = ring.len();
    (0..n)
        .filter(|&i| {
            let a = ring[(i + n - 1) % n];
            let b = ring[i];
            let c = ring[(i + 1) % n];
            (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0) != 0
        })
        .map(|i| ring[i])
        .collect()
}

/// Outline of a 4-connected cell set, in metres.
pub fn outline(grid: &Grid, cells: &[CellId]) -> Polygon {
    let s = grid.cell_size;
    let mut rings: Vec<Vec<Point>> = trace_lattice(grid, cells)
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|(c, w)| {
                    Point::new(grid.origin.x + c as f64 * s, grid.origin.y + w as f64 * s)
                })
                .collect()
        })
        .collect();
    // outer ring first, holes after
    rings.sort_by(|a, b| signed_area(b).total_cmp(&signed_area(a)));
    rings
}
