//! Circulation routing over the allocation result.
//!
//! Corridors may run on free cells and on room boundary cells; room
//! interiors are not part of the graph. Edge lengths grade by cell type so
//! that free space is preferred. Paths are grown from the floorplan entry with
//! a Dijkstra variant that discounts every edge of an established path, which
//! pulls later paths onto earlier ones.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::error::CirculationError;
use crate::field::{is_boundary_cell, Allocation};
use crate::grid::{CellId, Grid};
use crate::spec::DesignSpec;

pub const FREE_FREE_LENGTH: f64 = 2.0;
pub const FREE_BOUNDARY_LENGTH: f64 = 5.0;
pub const BOUNDARY_BOUNDARY_LENGTH: f64 = 10.0;

/// Default edge discount applied along each established path.
pub const DEFAULT_SHORTEN_FACTOR: f64 = 0.8;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Free,
    Boundary { room: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    pub length: f64,
}

/// Undirected weighted graph on free and room-boundary cells.
#[derive(Debug, Clone)]
pub struct PathGraph {
    cells: Vec<CellId>,
    kinds: Vec<NodeKind>,
    node_of: Vec<Option<NodeId>>,
    adjacency: Vec<Vec<(NodeId, usize)>>,
    edges: Vec<Edge>,
}

impl PathGraph {
    pub fn node_count(&self) -> usize {
        self.cells.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, cell: CellId) -> Option<NodeId> {
        self.node_of.get(cell).copied().flatten()
    }

    pub fn cell(&self, node: NodeId) -> CellId {
        self.cells[node]
    }

    pub fn kind(&self, node: NodeId) -> NodeKind {
        self.kinds[node]
    }

    /// `(neighbour, edge index)` pairs in ascending neighbour order.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, usize)] {
        &self.adjacency[node]
    }

    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<&Edge> {
        self.adjacency[a]
            .iter()
            .find(|(n, _)| *n == b)
            .map(|&(_, e)| &self.edges[e])
    }
}

pub fn build_path_graph(alloc: &Allocation, grid: &Grid) -> PathGraph {
    let mut cells = Vec::new();
    let mut kinds = Vec::new();
    let mut node_of = vec![None; grid.len()];
    for &id in grid.inside_cells() {
        let kind = match alloc.owner(id) {
            None => NodeKind::Free,
            Some(room) if is_boundary_cell(alloc, grid, id) => NodeKind::Boundary { room },
            Some(_) => continue,
        };
        node_of[id] = Some(cells.len());
        cells.push(id);
        kinds.push(kind);
    }
    let mut adjacency = vec![Vec::new(); cells.len()];
    let mut edges = Vec::new();
    for (a, &cell) in cells.iter().enumerate() {
        for n in grid.neighbors(cell) {
            let Some(b) = node_of[n] else { continue };
            if b <= a {
                continue;
            }
            let length = match (kinds[a], kinds[b]) {
                (NodeKind::Free, NodeKind::Free) => FREE_FREE_LENGTH,
                (NodeKind::Boundary { .. }, NodeKind::Boundary { .. }) => BOUNDARY_BOUNDARY_LENGTH,
                _ => FREE_BOUNDARY_LENGTH,
            };
            let e = edges.len();
            edges.push(Edge { a, b, length });
            adjacency[a].push((b, e));
            adjacency[b].push((a, e));
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    PathGraph {
        cells,
        kinds,
        node_of,
        adjacency,
        edges,
    }
}

/// Pick each room's entrance from its eligible boundary cells (those touching a
/// graph node of something other than the room itself), by
/// `floor(fraction * count)` in row-major order. `None` marks an entrance-less room.
pub fn select_entrances(fractions: &[f64], alloc: &Allocation, grid: &Grid) -> Vec<Option<CellId>> {
    (0..alloc.room_count())
        .map(|room| {
            let eligible: Vec<CellId> = alloc
                .room_cells(room)
                .iter()
                .copied()
                .filter(|&id| grid.neighbors(id).any(|n| alloc.owner(n) != Some(room)))
                .collect();
            if eligible.is_empty() {
                return None;
            }
            let fraction = fractions.get(room).copied().unwrap_or(0.0);
            Some(eligible[floor_index(fraction, eligible.len())])
        })
        .collect()
}

/// `floor(fraction * count)`, clamped so that 1.0 maps to the last index.
pub fn floor_index(fraction: f64, count: usize) -> usize {
    debug_assert!(count > 0);
    let f = if fraction.is_nan() { 0.0 } else { fraction.clamp(0.0, 1.0) };
    ((f * count as f64).floor() as usize).min(count - 1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct QueueEntry {
    dist: f64,
    node: NodeId,
}

impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, node)
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest paths; unreachable nodes keep `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPaths {
    pub dist: Vec<f64>,
    pub pred: Vec<Option<NodeId>>,
}

/// Textbook Dijkstra with a binary heap.
pub fn dijkstra_reference(graph: &PathGraph, source: CellId) -> Result<ShortestPaths, CirculationError> {
    let s = graph.node(source).ok_or(CirculationError::NotANode(source))?;
    let n = graph.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(QueueEntry { dist: 0.0, node: s });
    while let Some(QueueEntry { dist: d, node: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &(v, e) in graph.neighbors(u) {
            let nd = d + graph.edges[e].length;
            if nd < dist[v] {
                dist[v] = nd;
                pred[v] = Some(u);
                heap.push(QueueEntry { dist: nd, node: v });
            }
        }
    }
    Ok(ShortestPaths { dist, pred })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathOptions {
    /// Multiplier applied to every edge of an established path, in (0, 1].
    pub shorten_factor: f64,
    /// Among equal-distance predecessors prefer one on an established path.
    pub prefer_established: bool,
}

impl Default for PathOptions {
    fn default() -> Self {
        Self {
            shorten_factor: DEFAULT_SHORTEN_FACTOR,
            prefer_established: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoomPath {
    /// Source first, room entrance last.
    pub cells: Vec<CellId>,
    /// Discounted distance when the entrance was settled.
    pub distance: f64,
    /// Same path measured with undiscounted edge lengths.
    pub base_length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CirculationPattern {
    pub source: CellId,
    pub entrances: Vec<Option<CellId>>,
    pub paths: Vec<Option<RoomPath>>,
    /// Free cells used by any path, row-major.
    pub corridor_cells: Vec<CellId>,
    /// Final discounted distance per graph node.
    pub distances: Vec<f64>,
    /// Rooms in the order their entrances were reached.
    pub settle_order: Vec<usize>,
}

impl CirculationPattern {
    pub fn reachable(&self, room: usize) -> bool {
        self.paths[room].is_some()
    }

    pub fn unreachable_rooms(&self) -> Vec<usize> {
        (0..self.paths.len()).filter(|&r| !self.reachable(r)).collect()
    }
}

fn ties(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Grow paths from `source` to every room entrance, shortening each found
/// path's edges by `shorten_factor` so later paths reuse it.
///
/// When an entrance is settled its path is frozen, the path's edges are
/// discounted, cumulative distances along it are recomputed, and its nodes are
/// pushed back on the frontier so their neighbours see the cheaper route.
pub fn path_generation(
    graph: &PathGraph,
    source: CellId,
    entrances: &[Option<CellId>],
    options: PathOptions,
) -> Result<CirculationPattern, CirculationError> {
    let s = graph.node(source).ok_or(CirculationError::NotANode(source))?;
    let n = graph.node_count();
    let mut lengths: Vec<f64> = graph.edges.iter().map(|e| e.length).collect();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<(NodeId, usize)>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut established = vec![false; n];

    let mut waiting: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (room, e) in entrances.iter().enumerate() {
        if let Some(node) = e.and_then(|c| graph.node(c)) {
            waiting[node].push(room);
        }
    }
    let mut paths: Vec<Option<RoomPath>> = vec![None; entrances.len()];
    let mut settle_order = Vec::new();

    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(QueueEntry { dist: 0.0, node: s });

    while let Some(QueueEntry { dist: d, node: u }) = heap.pop() {
        if settled[u] || d != dist[u] {
            continue;
        }
        settled[u] = true;

        if !waiting[u].is_empty() {
            let chain = trace(&pred, s, u, n);
            let base_length = chain
                .windows(2)
                .map(|w| graph.edges[edge_of(&pred, w[1])].length)
                .fold(0.0, |acc, x| acc + x);
            let cells: Vec<CellId> = chain.iter().map(|&v| graph.cells[v]).collect();
            for room in std::mem::take(&mut waiting[u]) {
                paths[room] = Some(RoomPath {
                    cells: cells.clone(),
                    distance: dist[u],
                    base_length,
                });
                settle_order.push(room);
            }
            for w in chain.windows(2) {
                let e = edge_of(&pred, w[1]);
                lengths[e] *= options.shorten_factor;
                dist[w[1]] = dist[w[0]] + lengths[e];
            }
            for &v in &chain {
                established[v] = true;
                settled[v] = false;
                heap.push(QueueEntry { dist: dist[v], node: v });
            }
            continue;
        }

        for &(v, e) in graph.neighbors(u) {
            let nd = dist[u] + lengths[e];
            if options.prefer_established && !settled[v] && dist[v].is_finite() && ties(nd, dist[v]) {
                if let Some((cur, _)) = pred[v] {
                    let better = (!established[u], u) < (!established[cur], cur);
                    if better {
                        pred[v] = Some((u, e));
                        if nd < dist[v] {
                            dist[v] = nd;
                            heap.push(QueueEntry { dist: nd, node: v });
                        }
                    }
                }
            } else if nd < dist[v] {
                dist[v] = nd;
                pred[v] = Some((u, e));
                settled[v] = false;
                heap.push(QueueEntry { dist: nd, node: v });
            }
        }
    }

    let mut corridor = BTreeSet::new();
    for p in paths.iter().flatten() {
        for &c in &p.cells {
            if graph.node(c).map(|v| graph.kinds[v]) == Some(NodeKind::Free) {
                corridor.insert(c);
            }
        }
    }
    Ok(CirculationPattern {
        source,
        entrances: entrances.to_vec(),
        paths,
        corridor_cells: corridor.into_iter().collect(),
        distances: dist,
        settle_order,
    })
}

fn edge_of(pred: &[Option<(NodeId, usize)>], v: NodeId) -> usize {
    pred[v].expect("node on a traced path has a predecessor").1
}

fn trace(pred: &[Option<(NodeId, usize)>], s: NodeId, target: NodeId, n: usize) -> Vec<NodeId> {
    let mut chain = vec![target];
    let mut v = target;
    while v != s {
        v = pred[v].expect("settled node has a predecessor").0;
        chain.push(v);
        assert!(chain.len() <= n, "predecessor cycle");
    }
    chain.reverse();
    chain
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorridorMetrics {
    pub cells: Vec<CellId>,
    /// Corridor length `|cells| * s`, metres.
    pub length: f64,
    /// `2 N s` per entrance-less or unreachable room, metres.
    pub penalty_length: f64,
    /// `L = (length + penalty_length) * path_width`, m².
    pub area: f64,
}

pub fn corridor_metrics(pattern: &CirculationPattern, spec: &DesignSpec, grid: &Grid) -> CorridorMetrics {
    let s = grid.cell_size;
    let length = pattern.corridor_cells.len() as f64 * s;
    let missing = pattern.unreachable_rooms().len() as f64;
    let penalty_length = missing * 2.0 * grid.inside_count() as f64 * s;
    CorridorMetrics {
        cells: pattern.corridor_cells.clone(),
        length,
        penalty_length,
        area: (length + penalty_length) * spec.path_width,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{allocate_cells, FieldConstants, FieldParams};
    use crate::grid::build_grid;
    use crate::spec::parse_spec;

    fn rect_spec(w: usize, h: usize) -> DesignSpec {
        parse_spec(&format!(
            r#"{{"envelope": [[0,0],[{w},0],[{w},{h}],[0,{h}]], "entrances": [[0.5,0]],
                "rooms": [{{"name": "r", "kind": "other", "width": [1,1], "height": [1,1]}}],
                "cell_size": 1, "objectives": ["area_minus_conflict", "circulation"]}}"#
        ))
        .unwrap()
    }

    #[test]
    fn free_edges_have_length_two() {
        let spec = rect_spec(2, 1);
        let grid = build_grid(&spec).unwrap();
        let alloc = Allocation::from_room_cells(&grid, vec![]);
        let g = build_path_graph(&alloc, &grid);
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].length, 2.0);
    }

    #[test]
    fn room_interiors_excluded_and_lengths_graded() {
        let spec = rect_spec(7, 7);
        let grid = build_grid(&spec).unwrap();
        let alloc = allocate_cells(
            &grid,
            &[FieldParams::new(3.5, 3.5, 3.0, 3.0)],
            &FieldConstants::default(),
        );
        let g = build_path_graph(&alloc, &grid);
        let centre = grid.id(3, 3).unwrap();
        assert!(g.node(centre).is_none());
        assert_eq!(g.node_count(), 49 - 1);
        let free = g.node(grid.id(1, 3).unwrap()).unwrap();
        let ring = g.node(grid.id(2, 3).unwrap()).unwrap();
        let ring_up = g.node(grid.id(2, 4).unwrap()).unwrap();
        assert_eq!(g.edge_between(free, ring).unwrap().length, 5.0);
        assert_eq!(g.edge_between(ring, ring_up).unwrap().length, 10.0);
    }

    #[test]
    fn entrance_fractions() {
        let spec = rect_spec(7, 7);
        let grid = build_grid(&spec).unwrap();
        let alloc = allocate_cells(
            &grid,
            &[FieldParams::new(3.5, 3.5, 3.0, 3.0)],
            &FieldConstants::default(),
        );
        let first = select_entrances(&[0.0], &alloc, &grid)[0].unwrap();
        assert_eq!(first, grid.id(2, 2).unwrap());
        let last = select_entrances(&[0.999], &alloc, &grid)[0].unwrap();
        assert_eq!(last, grid.id(4, 4).unwrap());
        let empty = Allocation::from_room_cells(&grid, vec![vec![]]);
        assert_eq!(select_entrances(&[0.5], &empty, &grid), vec![None]);
        assert_eq!(floor_index(0.999, 8), 7);
        assert_eq!(floor_index(1.0, 8), 7);
    }

    #[test]
    fn room_filling_envelope_has_no_entrance() {
        let spec = rect_spec(3, 3);
        let grid = build_grid(&spec).unwrap();
        let all = grid.inside_cells().to_vec();
        let alloc = Allocation::from_room_cells(&grid, vec![all]);
        assert_eq!(select_entrances(&[0.2], &alloc, &grid), vec![None]);
    }

    #[test]
    fn reference_distances() {
        let spec = rect_spec(3, 1);
        let grid = build_grid(&spec).unwrap();
        let alloc = Allocation::from_room_cells(&grid, vec![]);
        let g = build_path_graph(&alloc, &grid);
        let sp = dijkstra_reference(&g, 0).unwrap();
        assert_eq!(sp.dist, vec![0.0, 2.0, 4.0]);

        let single = rect_spec(1, 1);
        let grid1 = build_grid(&single).unwrap();
        let g1 = build_path_graph(&Allocation::from_room_cells(&grid1, vec![]), &grid1);
        assert_eq!(dijkstra_reference(&g1, 0).unwrap().dist, vec![0.0]);
        assert_eq!(dijkstra_reference(&g1, 5), Err(CirculationError::NotANode(5)));
    }

    #[test]
    fn separated_component_is_unreachable() {
        // two 3x3 halves joined by a neck thinner than one cell
        let spec = parse_spec(
            r#"{"envelope": [[0,0],[3,0],[3,1],[4,1],[4,0],[7,0],[7,3],[4,3],[4,1.4],[3,1.4],[3,3],[0,3]],
                "entrances": [[0.5,0]],
                "rooms": [{"name": "r", "kind": "other", "width": [1,1], "height": [1,1]}],
                "cell_size": 1, "objectives": ["circulation"]}"#,
        )
        .unwrap();
        let grid = build_grid(&spec).unwrap();
        assert_eq!(grid.inside_count(), 18);
        let alloc = Allocation::from_room_cells(&grid, vec![]);
        let g = build_path_graph(&alloc, &grid);
        let sp = dijkstra_reference(&g, 0).unwrap();
        let far = g.node(grid.id(6, 0).unwrap()).unwrap();
        assert!(sp.dist[far].is_infinite());
        let p = path_generation(&g, 0, &[Some(grid.id(6, 0).unwrap())], PathOptions::default())
            .unwrap();
        assert!(!p.reachable(0));
    }

    #[test]
    fn single_entrance_matches_reference() {
        let spec = rect_spec(9, 7);
        let grid = build_grid(&spec).unwrap();
        let alloc = allocate_cells(
            &grid,
            &[FieldParams::new(5.0, 4.0, 4.0, 3.0)],
            &FieldConstants::default(),
        );
        let entrances = select_entrances(&[0.6], &alloc, &grid);
        let g = build_path_graph(&alloc, &grid);
        let pattern = path_generation(&g, 0, &entrances, PathOptions::default()).unwrap();
        let reference = dijkstra_reference(&g, 0).unwrap();
        let path = pattern.paths[0].as_ref().unwrap();
        let target = g.node(entrances[0].unwrap()).unwrap();
        assert_eq!(path.distance, reference.dist[target]);
        assert_eq!(path.base_length, reference.dist[target]);
        assert_eq!(path.cells.first(), Some(&0));
        assert_eq!(path.cells.last(), entrances[0].as_ref());
    }

    #[test]
    fn corridor_counting() {
        let spec = rect_spec(10, 10);
        let grid = build_grid(&spec).unwrap();
        let mut pattern = CirculationPattern {
            source: 0,
            entrances: vec![Some(4)],
            paths: vec![Some(RoomPath {
                cells: vec![0, 1, 2, 3, 4],
                distance: 8.0,
                base_length: 8.0,
            })],
            corridor_cells: vec![0, 1, 2, 3, 4],
            distances: vec![],
            settle_order: vec![0],
        };
        assert_eq!(corridor_metrics(&pattern, &spec, &grid).area, 5.0);

        pattern.corridor_cells = vec![0, 1, 2, 3];
        assert_eq!(corridor_metrics(&pattern, &spec, &grid).area, 4.0);

        pattern.paths.push(None);
        pattern.entrances.push(None);
        let m = corridor_metrics(&pattern, &spec, &grid);
        assert_eq!(m.penalty_length, 200.0);
        assert_eq!(m.area, 204.0);
    }

    #[test]
    fn boundary_cells_on_paths_are_not_corridor() {
        let spec = rect_spec(5, 1);
        let grid = build_grid(&spec).unwrap();
        // room owns cell 4 only; path 0..=4 crosses four free cells
        let alloc = Allocation::from_room_cells(&grid, vec![vec![4]]);
        let g = build_path_graph(&alloc, &grid);
        let p = path_generation(&g, 0, &[Some(4)], PathOptions::default()).unwrap();
        assert_eq!(p.corridor_cells, vec![0, 1, 2, 3]);
        assert_eq!(p.paths[0].as_ref().unwrap().base_length, 2.0 * 3.0 + 5.0);
    }

    fn tight_paths(g: &PathGraph, dist: &[f64], s: NodeId, t: NodeId) -> Vec<Vec<CellId>> {
        let mut out = Vec::new();
        let mut stack = vec![vec![t]];
        while let Some(p) = stack.pop() {
            let v = *p.last().unwrap();
            if v == s {
                out.push(p.iter().map(|&n| g.cell(n)).collect());
                continue;
            }
            for &(u, e) in g.neighbors(v) {
                if (dist[u] + g.edges()[e].length - dist[v]).abs() < 1e-9 {
                    let mut q = p.clone();
                    q.push(u);
                    stack.push(q);
                }
            }
        }
        out
    }

    #[test]
    fn shared_corridor_beats_independent_shortest_paths() {
        let spec = rect_spec(7, 7);
        let grid = build_grid(&spec).unwrap();
        let a = grid.id(3, 3).unwrap();
        let b = grid.id(6, 6).unwrap();
        let alloc = Allocation::from_room_cells(&grid, vec![vec![a], vec![b]]);
        let g = build_path_graph(&alloc, &grid);
        let dist = dijkstra_reference(&g, 0).unwrap().dist;
        let s = g.node(0).unwrap();
        let fa = tight_paths(&g, &dist, s, g.node(a).unwrap());
        let fb = tight_paths(&g, &dist, s, g.node(b).unwrap());
        let (mut lo, mut hi) = (usize::MAX, 0);
        for pa in &fa {
            for pb in &fb {
                let mut u: Vec<CellId> = pa.iter().chain(pb).copied().filter(|&c| alloc.is_free(&grid, c)).collect();
                u.sort_unstable();
                u.dedup();
                lo = lo.min(u.len());
                hi = hi.max(u.len());
            }
        }
        let ours = path_generation(&g, 0, &[Some(a), Some(b)], PathOptions::default()).unwrap();
        let n = ours.corridor_cells.len();
        assert!(n <= lo && n < hi, "ours {n}, unions {lo}..{hi}");
    }
}
