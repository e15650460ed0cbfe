mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fieldplan::circulation::{build_path_graph, dijkstra_reference, path_generation, PathOptions};
use fieldplan::evaluation::shadow_area;
use fieldplan::evolution::operators::sbx_pair;
use fieldplan::evolution::{evolve, OptimizerConfig};
use fieldplan::field::{allocate_cells, Allocation, FieldConstants, FieldParams};
use fieldplan::geometry::{strictly_inside, Point};
use fieldplan::grid::{build_grid, CellId};
use fieldplan::layout::{default_settings, Genome, LayoutModel};
use fieldplan::spec::parse_spec;

use common::{dominates, open_grid, rectangle_oracle, relaxation_distances};

fn field() -> impl Strategy<Value = FieldParams> {
    (0.0..30.0f64, 0.0..30.0f64, 2.0..8.0f64, 2.0..8.0f64).prop_map(|(x, y, mx, my)| FieldParams::new(x, y, mx, my))
}

/// Staircase envelope: column heights along x, each at least one cell.
fn staircase(heights: &[u8]) -> String {
    let w = heights.len();
    let mut pts = vec![format!("[{w},0]"), "[0,0]".to_string()];
    let mut x = 0;
    for (i, &h) in heights.iter().enumerate() {
        if i == 0 || heights[i - 1] != h {
            pts.push(format!("[{x},{h}]"));
        }
        let next = heights.get(i + 1).copied();
        if next != Some(h) {
            pts.push(format!("[{},{h}]", i + 1));
        }
        x = i + 1;
    }
    // walk counterclockwise: reverse the clockwise sweep above
    pts.reverse();
    pts.dedup();
    format!(
        r#"{{"envelope": [{}], "entrances": [[0.5,0]],
            "rooms": [{{"name": "r", "kind": "living", "width": [1,4], "height": [1,4]}}],
            "cell_size": 1, "objectives": ["area_minus_conflict"]}}"#,
        pts.join(",")
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_field_is_its_rectangle(fp in field()) {
        let grid = open_grid(30, 30);
        let c = FieldConstants::default();
        let got: BTreeSet<CellId> = allocate_cells(&grid, &[fp], &c).room_cells(0).iter().copied().collect();
        prop_assert_eq!(got, rectangle_oracle(&grid, fp.x0, fp.y0, fp.m_x, fp.m_y, c.delta, c.epsilon));
    }

    #[test]
    fn allocation_partitions_inside_cells(fields in prop::collection::vec(field(), 1..5)) {
        let grid = open_grid(30, 30);
        let alloc = allocate_cells(&grid, &fields, &FieldConstants::default());
        let mut seen = BTreeSet::new();
        for r in 0..fields.len() {
            for &c in alloc.room_cells(r) {
                prop_assert!(seen.insert(c));
                prop_assert_eq!(alloc.owner(c), Some(r));
            }
        }
        let free: BTreeSet<CellId> = alloc.free_cells(&grid).collect();
        prop_assert!(free.is_disjoint(&seen));
        prop_assert_eq!(free.len() + seen.len(), grid.inside_count());
    }

    #[test]
    fn larger_mass_never_loses_cells(fp in field(), grow in 0.0..3.0f64) {
        let grid = open_grid(30, 30);
        let c = FieldConstants::default();
        let small: BTreeSet<CellId> = allocate_cells(&grid, &[fp], &c).room_cells(0).iter().copied().collect();
        let big_fp = FieldParams { m_x: fp.m_x + grow, ..fp };
        let big: BTreeSet<CellId> = allocate_cells(&grid, &[big_fp], &c).room_cells(0).iter().copied().collect();
        prop_assert!(small.is_subset(&big));
    }

    #[test]
    fn whole_cell_shift_shifts_the_room(fp in (8.0..14.0f64, 8.0..14.0f64, 2.0..6.0f64, 2.0..6.0f64), dc in 0usize..6, dr in 0usize..6) {
        let grid = open_grid(30, 30);
        let c = FieldConstants::default();
        let base = FieldParams::new(fp.0, fp.1, fp.2, fp.3);
        let moved = FieldParams::new(fp.0 + dc as f64, fp.1 + dr as f64, fp.2, fp.3);
        let a = allocate_cells(&grid, &[base], &c);
        let b = allocate_cells(&grid, &[moved], &c);
        let shifted: BTreeSet<CellId> = a.room_cells(0).iter().map(|&id| {
            let (col, row) = grid.col_row(id);
            grid.id(col + dc, row + dr).unwrap()
        }).collect();
        let got: BTreeSet<CellId> = b.room_cells(0).iter().copied().collect();
        prop_assert_eq!(got, shifted);
    }

    #[test]
    fn grid_matches_point_in_polygon(heights in prop::collection::vec(1u8..8, 2..9)) {
        let spec = parse_spec(&staircase(&heights)).unwrap();
        let grid = build_grid(&spec).unwrap();
        let mut expected = 0;
        for row in 0..grid.rows {
            for col in 0..grid.columns {
                let id = grid.id(col, row).unwrap();
                let inside = strictly_inside(&spec.envelope, grid.center(id));
                prop_assert_eq!(inside, grid.is_inside(id));
                expected += usize::from(inside);
            }
        }
        let area: usize = heights.iter().map(|&h| h as usize).sum();
        prop_assert_eq!(expected, area);
        prop_assert_eq!(grid.inside_count(), area);
        // building twice gives the same grid
        prop_assert_eq!(build_grid(&spec).unwrap(), grid);
    }

    #[test]
    fn paths_are_connected_walks_to_entrances(fields in prop::collection::vec(field(), 1..4), picks in prop::collection::vec(0.0..1.0f64, 3)) {
        let grid = open_grid(30, 30);
        let alloc = allocate_cells(&grid, &fields, &FieldConstants::default());
        let entrances = fieldplan::circulation::select_entrances(&picks[..fields.len()], &alloc, &grid);
        let graph = build_path_graph(&alloc, &grid);
        let source = grid.perimeter_cells().find(|&c| graph.node(c).is_some()).unwrap();
        let pattern = path_generation(&graph, source, &entrances, PathOptions::default()).unwrap();
        let reference = dijkstra_reference(&graph, source).unwrap();
        for (room, path) in pattern.paths.iter().enumerate() {
            let Some(path) = path else { continue };
            prop_assert_eq!(path.cells[0], source);
            prop_assert_eq!(Some(*path.cells.last().unwrap()), entrances[room]);
            for w in path.cells.windows(2) {
                let a = graph.node(w[0]).unwrap();
                let b = graph.node(w[1]).unwrap();
                prop_assert!(graph.edge_between(a, b).is_some());
            }
            let target = graph.node(entrances[room].unwrap()).unwrap();
            prop_assert!(path.base_length + 1e-9 >= reference.dist[target]);
            prop_assert!(path.distance <= path.base_length + 1e-9);
        }
    }

    #[test]
    fn reference_dijkstra_matches_relaxation(fields in prop::collection::vec(field(), 0..4)) {
        let grid = open_grid(20, 20);
        let alloc = allocate_cells(&grid, &fields, &FieldConstants::default());
        let graph = build_path_graph(&alloc, &grid);
        let Some(source) = grid.perimeter_cells().find(|&c| graph.node(c).is_some()) else { return Ok(()) };
        prop_assert_eq!(dijkstra_reference(&graph, source).unwrap().dist, relaxation_distances(&graph, source));
    }

    #[test]
    fn removing_a_window_never_lowers_shadow(cols in 1usize..6, drop in 0usize..4) {
        let spec = parse_spec(r#"{"envelope": [[0,0],[6,0],[6,6],[0,6]], "entrances": [[6,3]],
            "windows": [{"edge": [[0,0],[6,0]]}, {"edge": [[6,0],[6,6]]}, {"edge": [[6,6],[0,6]]}, {"edge": [[0,6],[0,0]]}],
            "rooms": [{"name": "a", "kind": "bedroom", "width": [1,6], "height": [1,6]},
                      {"name": "b", "kind": "living", "width": [1,6], "height": [1,6]}],
            "cell_size": 1, "objectives": ["shadow"], "light_directions": [[0,1],[1,0],[1,1]]}"#).unwrap();
        let grid = build_grid(&spec).unwrap();
        let left: Vec<CellId> = grid.inside_cells().iter().copied().filter(|&c| grid.col_row(c).0 < cols).collect();
        let right: Vec<CellId> = grid.inside_cells().iter().copied().filter(|&c| grid.col_row(c).0 >= cols).collect();
        let alloc = Allocation::from_room_cells(&grid, vec![left, right]);
        let before = shadow_area(&alloc, &grid, &spec, &spec.light_directions).unwrap();
        let mut fewer = spec.clone();
        fewer.windows.remove(drop);
        let after = shadow_area(&alloc, &grid, &fewer, &fewer.light_directions).unwrap();
        prop_assert!(after >= before);
    }
}

#[test]
fn sbx_preserves_the_parent_mean() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (y1, y2) = (0.2, 0.7);
    let n = 10_000;
    let samples: Vec<f64> = (0..n)
        .flat_map(|_| {
            let (a, b) = sbx_pair(y1, y2, 20.0, &mut rng);
            [a, b]
        })
        .collect();
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64;
    let se = (var / samples.len() as f64).sqrt();
    assert!((mean - 0.45).abs() <= 3.0 * se + 1e-12, "mean {mean}, se {se}");
    // single children spread around the parents
    let c1: Vec<f64> = samples.iter().step_by(2).copied().collect();
    let m1 = c1.iter().sum::<f64>() / c1.len() as f64;
    assert!((m1 - 0.2).abs() < 0.05);
}

#[test]
fn elitism_front_never_regresses() {
    let spec = parse_spec(
        r#"{"envelope": [[0,0],[10,0],[10,8],[0,8]], "entrances": [[5,0]],
            "rooms": [{"name": "a", "kind": "living", "width": [3,5], "height": [3,4]},
                      {"name": "b", "kind": "bedroom", "width": [2,4], "height": [2,4]},
                      {"name": "c", "kind": "bathroom", "width": [2,3], "height": [2,3]}],
            "cell_size": 1, "objectives": ["area_minus_conflict", "circulation"]}"#,
    )
    .unwrap();
    let config = OptimizerConfig {
        population_size: 16,
        generations: 25,
        seed: 9,
        ..OptimizerConfig::default()
    };
    let archive = evolve(&spec, &config, default_settings()).unwrap();
    for g in 0..config.generations {
        let now: Vec<Vec<f64>> = archive.front_of(g).iter().map(|m| m.objectives.clone()).collect();
        let next: Vec<Vec<f64>> = archive.front_of(g + 1).iter().map(|m| m.objectives.clone()).collect();
        // a dropped elite can only have been cut by crowding within the first front
        for a in &now {
            assert!(
                next.iter().any(|b| b == a || dominates(b, a)) || !next.iter().any(|b| dominates(a, b)),
                "generation {g} -> {}",
                g + 1
            );
        }
        let dominated_as_set = next.iter().all(|b| now.iter().any(|a| dominates(a, b)));
        assert!(!dominated_as_set, "generation {} front dominated by generation {g}", g + 1);
    }
}

#[test]
fn identical_runs_are_bit_identical() {
    let spec = parse_spec(
        r#"{"envelope": [[0,0],[9,0],[9,7],[0,7]], "entrances": [[4.5,0],[0,3.5]],
            "rooms": [{"name": "a", "kind": "living", "width": [3,4], "height": [3,4]},
                      {"name": "b", "kind": "bedroom", "width": [2,3], "height": [2,3]}],
            "adjacency": [[0,1]],
            "cell_size": 1, "objectives": ["area_minus_conflict", "circulation", "adjacency"]}"#,
    )
    .unwrap();
    let config = OptimizerConfig {
        population_size: 12,
        generations: 8,
        seed: 1234,
        ..OptimizerConfig::default()
    };
    let a = evolve(&spec, &config, default_settings()).unwrap();
    let b = evolve(&spec, &config, default_settings()).unwrap();
    let bytes = |x| fieldplan::io::canonical_json(x).unwrap();
    assert_eq!(bytes(&a), bytes(&b));
}

#[test]
fn evaluation_is_a_pure_function_of_the_genome() {
    let spec = parse_spec(
        r#"{"envelope": [[0,0],[8,0],[8,8],[0,8]], "entrances": [[4,0]],
            "rooms": [{"name": "a", "kind": "living", "width": [3,4], "height": [3,4]}],
            "cell_size": 1, "objectives": ["circulation", "area_minus_conflict"]}"#,
    )
    .unwrap();
    let model = LayoutModel::new(spec, default_settings()).unwrap();
    let g = Genome(vec![0.0, 0.6, 0.6, 0.2, 0.9, 0.5]);
    assert_eq!(model.generate(&g).unwrap().objectives, model.generate(&g).unwrap().objectives);
    let p = model.grid.center(model.decode(&g).unwrap().entry_cell);
    assert_eq!(p, Point::new(3.5, 0.5));
}
