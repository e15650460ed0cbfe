//! Field-based floorplan generation.
//!
//! Rooms claim grid cells through competing rectangular fields, a modified
//! Dijkstra search lays corridors from the entry to every room, and NSGA-II
//! evolves the field parameters against area, circulation, daylight and
//! adjacency objectives.

pub mod circulation;
pub mod cli;
pub mod error;
pub mod evaluation;
pub mod evolution;
pub mod field;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod layout;
pub mod spec;

pub use error::{
    CirculationError, DocumentError, EvaluationError, EvolutionError, FieldError, GridError, SpecError,
};
pub use evaluation::{evaluate_layout, ObjectiveVector};
pub use evolution::{evolve, OptimizerConfig, RunArchive};
pub use field::{allocate_cells, FieldConstants, FieldParams};
pub use grid::{build_grid, Grid};
pub use layout::{default_settings, EngineSettings, Genome, Layout, LayoutModel};
pub use spec::{load_spec, parse_spec, DesignSpec, Objective};
