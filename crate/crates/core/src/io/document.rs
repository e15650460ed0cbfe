//! Parametric layout documents.

use serde::{Deserialize, Serialize};

use super::outline::{outline, Polygon};
use super::canonical_json;
use crate::error::DocumentError;
use crate::evaluation::ObjectiveVector;
use crate::field::FieldParams;
use crate::grid::{CellId, Grid};
use crate::layout::{EngineSettings, Genome, Layout, LayoutModel};
use crate::spec::{DesignSpec, Objective, RoomKind};

pub const FORMAT: &str = "fieldplan-layout/1";

/// Cell position as `[column, row]`.
pub type CellRef = [usize; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveValue {
    pub name: Objective,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoomDocument {
    pub name: String,
    pub kind: RoomKind,
    pub area: f64,
    pub cells: Vec<CellRef>,
    /// One polygon per 4-connected component.
    pub outlines: Vec<Polygon>,
    pub entrance: Option<CellRef>,
    pub reachable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub internal_area: f64,
    pub conflict: f64,
    pub circulation_area: f64,
    pub shadow: Option<f64>,
    pub adjacency: f64,
    /// Rooms split into more than one component.
    pub disconnected_rooms: Vec<usize>,
    pub unreachable_rooms: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutDocument {
    pub format: String,
    pub spec_fingerprint: String,
    pub spec: DesignSpec,
    pub settings: EngineSettings,
    pub genome: Genome,
    pub fields: Vec<FieldParams>,
    pub entry: CellRef,
    pub rooms: Vec<RoomDocument>,
    pub corridor_cells: Vec<CellRef>,
    pub objectives: Vec<ObjectiveValue>,
    pub diagnostics: Diagnostics,
}

fn cell_ref(grid: &Grid, id: CellId) -> CellRef {
    let (c, r) = grid.col_row(id);
    [c, r]
}

impl LayoutDocument {
    pub fn from_layout(model: &LayoutModel, genome: &Genome, layout: &Layout) -> Self {
        let grid = &model.grid;
        let alloc = &layout.allocation;
        let mut disconnected = Vec::new();
        let rooms = model
            .spec
            .rooms
            .iter()
            .enumerate()
            .map(|(i, spec_room)| {
                let components = alloc.components(grid, i);
                if components.len() > 1 {
                    disconnected.push(i);
                }
                RoomDocument {
                    name: spec_room.name.clone(),
                    kind: spec_room.kind,
                    area: alloc.room_area(i),
                    cells: alloc.room_cells(i).iter().map(|&c| cell_ref(grid, c)).collect(),
                    outlines: components.iter().map(|comp| outline(grid, comp)).collect(),
                    entrance: layout.circulation.entrances[i].map(|c| cell_ref(grid, c)),
                    reachable: layout.circulation.reachable(i),
                }
            })
            .collect();
        let s = &layout.scores;
        LayoutDocument {
            format: FORMAT.to_string(),
            spec_fingerprint: model.spec.fingerprint(),
            spec: model.spec.clone(),
            settings: model.settings,
            genome: genome.clone(),
            fields: layout.decoded.fields.clone(),
            entry: cell_ref(grid, layout.decoded.entry_cell),
            rooms,
            corridor_cells: layout
                .circulation
                .corridor_cells
                .iter()
                .map(|&c| cell_ref(grid, c))
                .collect(),
            objectives: objective_values(&layout.objectives),
            diagnostics: Diagnostics {
                internal_area: s.internal_area,
                conflict: s.conflict,
                circulation_area: s.circulation_area,
                shadow: s.shadow,
                adjacency: s.adjacency,
                disconnected_rooms: disconnected,
                unreachable_rooms: s.unreachable_rooms.clone(),
            },
        }
    }

    pub fn objective_vector(&self) -> ObjectiveVector {
        ObjectiveVector {
            labels: self.objectives.iter().map(|o| o.name).collect(),
            values: self.objectives.iter().map(|o| o.value).collect(),
        }
    }

    /// Rebuild the model from the embedded spec and settings and evaluate the genome again.
    pub fn reevaluate(&self) -> Result<ObjectiveVector, DocumentError> {
        let model = LayoutModel::new(self.spec.clone(), self.settings)
            .map_err(|e| DocumentError::Inconsistent(e.to_string()))?;
        let layout = model
            .generate(&self.genome)
            .map_err(|e| DocumentError::Inconsistent(e.to_string()))?;
        Ok(layout.objectives)
    }
}

pub fn objective_values(v: &ObjectiveVector) -> Vec<ObjectiveValue> {
    v.labels
        .iter()
        .zip(&v.values)
        .map(|(&name, &value)| ObjectiveValue { name, value })
        .collect()
}

/// Canonical bytes of a layout document.
pub fn write_layout(doc: &LayoutDocument) -> Result<Vec<u8>, DocumentError> {
    Ok(canonical_json(doc)?.into_bytes())
}

/// Parse a layout document and check its spec fingerprint.
pub fn read_layout(bytes: &[u8]) -> Result<LayoutDocument, DocumentError> {
    let doc: LayoutDocument = serde_json::from_slice(bytes)?;
    let spec = doc.spec.clone().validated()?;
    let actual = spec.fingerprint();
    if actual != doc.spec_fingerprint {
        return Err(DocumentError::Fingerprint {
            expected: doc.spec_fingerprint,
            actual,
        });
    }
    Ok(doc)
}
