//! Genome decoding and the full generate-one-layout pipeline:
//! decode -> allocate -> route -> evaluate.

use serde::{Deserialize, Serialize};

use crate::circulation::{build_path_graph, path_generation, select_entrances, floor_index, CirculationPattern, PathOptions};
use crate::error::{EvolutionError, GridError};
use crate::evaluation::{score_layout, LayoutScores, ObjectiveVector};
use crate::field::{allocate_cells, Allocation, FieldConstants, FieldParams};
use crate::geometry::bounding_box;
use crate::grid::{build_grid, entrance_candidate_cells, CellId, Grid};
use crate::spec::DesignSpec;

/// Genes per room: x0, y0, m_x, m_y, entrance.
pub const GENES_PER_ROOM: usize = 5;

/// Normalised real genome in `[0, 1]^(1 + 5k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Genome(pub Vec<f64>);

impl Genome {
    pub fn expected_len(rooms: usize) -> usize {
        1 + GENES_PER_ROOM * rooms
    }

    pub fn genes(&self) -> &[f64] {
        &self.0
    }
}

/// Model constants that are not genes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineSettings {
    pub field: FieldConstants,
    pub shorten_factor: f64,
}

impl EngineSettings {
    pub fn new(field: FieldConstants, shorten_factor: f64) -> Self {
        Self {
            field,
            shorten_factor,
        }
    }

    pub fn path_options(&self) -> PathOptions {
        PathOptions {
            shorten_factor: self.shorten_factor,
            prefer_established: true,
        }
    }
}

impl Default for EngineSettings {
    fn default() -> Self {
        Self::new(FieldConstants::default(), crate::circulation::DEFAULT_SHORTEN_FACTOR)
    }
}

/// Engine defaults: delta = sqrt 2, epsilon = 1e-9, shorten factor 0.8.
pub fn default_settings() -> EngineSettings {
    EngineSettings::default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodedGenome {
    pub entry_index: usize,
    pub entry_cell: CellId,
    pub fields: Vec<FieldParams>,
    pub entrance_fractions: Vec<f64>,
}

/// Spec, grid and entry candidates bundled for repeated decoding.
#[derive(Debug, Clone)]
pub struct LayoutModel {
    pub spec: DesignSpec,
    pub grid: Grid,
    pub candidates: Vec<CellId>,
    pub settings: EngineSettings,
}

#[derive(Debug, Clone)]
pub struct Layout {
    pub decoded: DecodedGenome,
    pub allocation: Allocation,
    pub circulation: CirculationPattern,
    pub scores: LayoutScores,
    pub objectives: ObjectiveVector,
}

pub fn decode_genome(g: &Genome, spec: &DesignSpec, grid: &Grid) -> Result<DecodedGenome, EvolutionError> {
    let candidates = entrance_candidate_cells(spec, grid)?;
    decode_with(g, spec, &candidates)
}

fn decode_with(g: &Genome, spec: &DesignSpec, candidates: &[CellId]) -> Result<DecodedGenome, EvolutionError> {
    let k = spec.rooms.len();
    let expected = Genome::expected_len(k);
    if g.0.len() != expected {
        return Err(EvolutionError::GenomeLength {
            expected,
            actual: g.0.len(),
        });
    }
    let (lo, hi) = bounding_box(&spec.envelope);
    let entry_index = floor_index(g.0[0], candidates.len());
    let mut fields = Vec::with_capacity(k);
    let mut entrance_fractions = Vec::with_capacity(k);
    for (i, room) in spec.rooms.iter().enumerate() {
        let genes = &g.0[1 + GENES_PER_ROOM * i..1 + GENES_PER_ROOM * (i + 1)];
        let lerp = |a: f64, b: f64, t: f64| a + t.clamp(0.0, 1.0) * (b - a);
        fields.push(FieldParams::new(
            lerp(lo.x, hi.x, genes[0]),
            lerp(lo.y, hi.y, genes[1]),
            lerp(room.width[0], room.width[1], genes[2]),
            lerp(room.height[0], room.height[1], genes[3]),
        ));
        entrance_fractions.push(genes[4].clamp(0.0, 1.0));
    }
    Ok(DecodedGenome {
        entry_index,
        entry_cell: candidates[entry_index],
        fields,
        entrance_fractions,
    })
}

impl LayoutModel {
    pub fn new(spec: DesignSpec, settings: EngineSettings) -> Result<Self, GridError> {
        let grid = build_grid(&spec)?;
        let candidates = entrance_candidate_cells(&spec, &grid)?;
        Ok(Self {
            spec,
            grid,
            candidates,
            settings,
        })
    }

    pub fn genome_len(&self) -> usize {
        Genome::expected_len(self.spec.rooms.len())
    }

    pub fn decode(&self, g: &Genome) -> Result<DecodedGenome, EvolutionError> {
        decode_with(g, &self.spec, &self.candidates)
    }

    /// Realise a genome as a full layout.
    pub fn generate(&self, g: &Genome) -> Result<Layout, EvolutionError> {
        let decoded = self.decode(g)?;
        Ok(self.realize(decoded))
    }

    pub fn realize(&self, decoded: DecodedGenome) -> Layout {
        let allocation = allocate_cells(&self.grid, &decoded.fields, &self.settings.field);
        let entrances = select_entrances(&decoded.entrance_fractions, &allocation, &self.grid);
        let graph = build_path_graph(&allocation, &self.grid);
        let circulation = path_generation(
            &graph,
            decoded.entry_cell,
            &entrances,
            self.settings.path_options(),
        )
        .expect("entry candidates are perimeter cells and always graph nodes");
        let scores = score_layout(&self.spec, &self.grid, &decoded.fields, &allocation, &circulation)
            .expect("light directions validated with the spec");
        let objectives = scores.objective_vector(&self.spec.objectives);
        Layout {
            decoded,
            allocation,
            circulation,
            scores,
            objectives,
        }
    }
}
