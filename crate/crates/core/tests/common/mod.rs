//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::SQRT_2;

use fieldplan::circulation::{build_path_graph, PathGraph};
use fieldplan::field::Allocation;
use fieldplan::grid::{build_grid, CellId, Grid};
use fieldplan::spec::{parse_spec, DesignSpec};

/// Rectangular envelope `w x h` metres with one dummy room, cell size 1.
pub fn open_spec(w: usize, h: usize) -> DesignSpec {
    parse_spec(&format!(
        r#"{{"envelope": [[0,0],[{w},0],[{w},{h}],[0,{h}]], "entrances": [[0,0.5]],
            "rooms": [{{"name": "r", "kind": "other", "width": [1,1], "height": [1,1]}}],
            "cell_size": 1, "objectives": ["area_minus_conflict"]}}"#
    ))
    .unwrap()
}

pub fn open_grid(w: usize, h: usize) -> Grid {
    build_grid(&open_spec(w, h)).unwrap()
}

/// Cells whose centres fall strictly inside the upright active rectangle,
/// with half-extents taken from the closed form of the field.
pub fn rectangle_oracle(grid: &Grid, x0: f64, y0: f64, mx: f64, my: f64, delta: f64, eps: f64) -> BTreeSet<CellId> {
    let reach = mx * my / delta - eps;
    let hx = reach / (SQRT_2 * my);
    let hy = reach / (SQRT_2 * mx);
    grid.inside_cells()
        .iter()
        .copied()
        .filter(|&c| {
            let p = grid.center(c);
            (p.x - x0).abs() < hx && (p.y - y0).abs() < hy
        })
        .collect()
}

/// `a` dominates `b` under minimisation.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Front index per member, by repeatedly peeling the members no remaining
/// member dominates.
pub fn brute_force_fronts(objs: &[Vec<f64>]) -> Vec<BTreeSet<usize>> {
    let n = objs.len();
    let dominated: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| dominates(&objs[j], &objs[i])).collect())
        .collect();
    let mut left: BTreeSet<usize> = (0..n).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: BTreeSet<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| dominated[i][j]))
            .collect();
        for i in &front {
            left.remove(i);
        }
        fronts.push(front);
    }
    fronts
}

/// Textbook Bellman-Ford style relaxation to a fixed point; slow but independent of any heap.
pub fn relaxation_distances(graph: &PathGraph, source: CellId) -> Vec<f64> {
    let n = graph.node_count();
    let mut dist = vec![f64::INFINITY; n];
    dist[graph.node(source).unwrap()] = 0.0;
    loop {
        let mut changed = false;
        for e in graph.edges() {
            for (u, v) in [(e.a, e.b), (e.b, e.a)] {
                if dist[u] + e.length < dist[v] {
                    dist[v] = dist[u] + e.length;
                    changed = true;
                }
            }
        }
        if !changed {
            return dist;
        }
    }
}

/// Every shortest path from `source` to `target`, as node lists.
pub fn all_shortest_paths(graph: &PathGraph, dist: &[f64], source: usize, target: usize) -> Vec<Vec<usize>> {
    if !dist[target].is_finite() {
        return Vec::new();
    }
    let tight = |u: usize, v: usize, len: f64| (dist[u] + len - dist[v]).abs() < 1e-9;
    let mut out = Vec::new();
    let mut stack = vec![vec![target]];
    while let Some(partial) = stack.pop() {
        let v = *partial.last().unwrap();
        if v == source {
            let mut p = partial.clone();
            p.reverse();
            out.push(p);
            continue;
        }
        for &(u, e) in graph.neighbors(v) {
            if tight(u, v, graph.edges()[e].length) {
                let mut next = partial.clone();
                next.push(u);
                stack.push(next);
            }
        }
    }
    out
}

/// Minimum and maximum number of distinct free cells over every choice of one
/// shortest path per target.
pub fn union_extremes(graph: &PathGraph, alloc: &Allocation, grid: &Grid, families: &[Vec<Vec<usize>>]) -> (usize, usize) {
    let free_sets: Vec<Vec<BTreeSet<CellId>>> = families
        .iter()
        .map(|fam| {
            fam.iter()
                .map(|p| {
                    p.iter()
                        .map(|&v| graph.cell(v))
                        .filter(|&c| alloc.is_free(grid, c))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut best = (usize::MAX, 0);
    let mut idx = vec![0usize; free_sets.len()];
    loop {
        let mut union = BTreeSet::new();
        for (k, &i) in idx.iter().enumerate() {
            union.extend(free_sets[k][i].iter().copied());
        }
        best = (best.0.min(union.len()), best.1.max(union.len()));
        let mut k = 0;
        loop {
            if k == idx.len() {
                return best;
            }
            idx[k] += 1;
            if idx[k] < free_sets[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Graph over an allocation; thin wrapper so tests read naturally.
pub fn graph_for(alloc: &Allocation, grid: &Grid) -> PathGraph {
    build_path_graph(alloc, grid)
}
