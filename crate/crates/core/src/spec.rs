//! Design specification: the declarative input describing envelope, rooms and goals.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SpecError;
use crate::geometry::{on_boundary, ring_edges, signed_area, Point, Segment, LENGTH_TOL};

/// Path width used when a specification does not set one.
pub const DEFAULT_PATH_WIDTH: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// `-(A - C)`: internal area with the conflict penalty, negated for minimisation.
    AreaMinusConflict,
    /// `L`: corridor area.
    Circulation,
    /// `S`: unlit area in habitable rooms.
    Shadow,
    /// `D`: graded distance between rooms that should touch.
    Adjacency,
}

impl Objective {
    pub const ALL: [Objective; 4] = [
        Objective::AreaMinusConflict,
        Objective::Circulation,
        Objective::Shadow,
        Objective::Adjacency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Objective::AreaMinusConflict => "area_minus_conflict",
            Objective::Circulation => "circulation",
            Objective::Shadow => "shadow",
            Objective::Adjacency => "adjacency",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Objective::ALL
            .into_iter()
            .find(|o| o.name() == s.trim())
            .ok_or_else(|| SpecError::UnknownObjective(s.trim().to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoomKind {
    Living,
    Dining,
    Bedroom,
    Bathroom,
    Kitchen,
    Study,
    Lift,
    Other,
}

impl RoomKind {
    pub fn default_habitable(self) -> bool {
        matches!(
            self,
            RoomKind::Living | RoomKind::Dining | RoomKind::Bedroom | RoomKind::Study
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            RoomKind::Living => "living",
            RoomKind::Dining => "dining",
            RoomKind::Bedroom => "bedroom",
            RoomKind::Bathroom => "bathroom",
            RoomKind::Kitchen => "kitchen",
            RoomKind::Study => "study",
            RoomKind::Lift => "lift",
            RoomKind::Other => "other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoomSpec {
    pub name: String,
    pub kind: RoomKind,
    /// Explicit override; otherwise derived from `kind`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub habitable: Option<bool>,
    /// Bounds of the horizontal mass parameter, metres.
    pub width: [f64; 2],
    /// Bounds of the vertical mass parameter, metres.
    pub height: [f64; 2],
}

impl RoomSpec {
    pub fn is_habitable(&self) -> bool {
        self.habitable.unwrap_or_else(|| self.kind.default_habitable())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub edge: [Point; 2],
}

impl Window {
    pub fn segment(&self) -> Segment {
        Segment::new(self.edge[0], self.edge[1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSpec {
    /// Rectilinear simple polygon, counterclockwise, metres.
    pub envelope: Vec<Point>,
    #[serde(default)]
    pub windows: Vec<Window>,
    /// Treat every envelope edge as a window wall when no fenestration is listed.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub all_windows: bool,
    pub entrances: Vec<Point>,
    pub rooms: Vec<RoomSpec>,
    #[serde(default)]
    pub adjacency: Vec<[usize; 2]>,
    #[serde(default)]
    pub open_plan: Vec<Vec<usize>>,
    pub cell_size: f64,
    pub objectives: Vec<Objective>,
    #[serde(default)]
    pub light_directions: Vec<Point>,
    #[serde(default = "default_path_width")]
    pub path_width: f64,
}

fn default_path_width() -> f64 {
    DEFAULT_PATH_WIDTH
}

/// Parse and validate a JSON specification.
pub fn load_spec<R: Read>(mut source: R) -> Result<DesignSpec, SpecError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    parse_spec(&text)
}

pub fn parse_spec(text: &str) -> Result<DesignSpec, SpecError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    // Unknown objectives get their own error rather than a generic serde message.
    if let Some(list) = value.get("objectives").and_then(|v| v.as_array()) {
        for item in list {
            if let Some(name) = item.as_str() {
                name.parse::<Objective>()?;
            }
        }
    }
    let spec: DesignSpec = serde_json::from_value(value)?;
    spec.validated()
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> SpecError {
    SpecError::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

impl DesignSpec {
    /// Check every invariant and return the normalised spec (counterclockwise
    /// envelope, unit light directions).
    pub fn validated(mut self) -> Result<Self, SpecError> {
        self.normalize_envelope()?;
        self.check_envelope()?;

        if !(self.cell_size.is_finite() && self.cell_size > 0.0) {
            return Err(invalid("cell_size", "must be positive"));
        }
        if !(self.path_width.is_finite() && self.path_width > 0.0) {
            return Err(invalid("path_width", "must be positive"));
        }

        for (i, w) in self.windows.iter().enumerate() {
            let seg = w.segment();
            if seg.length() <= LENGTH_TOL {
                return Err(invalid(format!("windows[{i}].edge"), "zero-length window"));
            }
            if !ring_edges(&self.envelope).any(|e| e.covers(&seg)) {
                return Err(invalid(
                    format!("windows[{i}].edge"),
                    "window segment does not lie on an envelope edge",
                ));
            }
        }

        if self.entrances.is_empty() {
            return Err(invalid("entrances", "at least one entrance candidate required"));
        }
        for (i, p) in self.entrances.iter().enumerate() {
            if !on_boundary(&self.envelope, *p) {
                return Err(invalid(
                    format!("entrances[{i}]"),
                    "entrance candidate is not on the envelope boundary",
                ));
            }
        }

        if self.rooms.is_empty() {
            return Err(invalid("rooms", "at least one room required"));
        }
        for (i, room) in self.rooms.iter().enumerate() {
            for (axis, range) in [("width", room.width), ("height", room.height)] {
                let path = format!("rooms[{i}].{axis}");
                let [lo, hi] = range;
                if !(lo.is_finite() && hi.is_finite()) {
                    return Err(invalid(path, "range must be finite"));
                }
                if lo <= 0.0 {
                    return Err(invalid(path, "range lo must be positive"));
                }
                if lo > hi {
                    return Err(invalid(path, "range lo > hi"));
                }
                if lo < self.cell_size - LENGTH_TOL {
                    return Err(invalid(path, "range is smaller than one cell"));
                }
            }
        }

        let k = self.rooms.len();
        for (i, [a, b]) in self.adjacency.iter().enumerate() {
            if *a >= k || *b >= k {
                return Err(invalid(format!("adjacency[{i}]"), "room index out of range"));
            }
            if a == b {
                return Err(invalid(format!("adjacency[{i}]"), "room paired with itself"));
            }
        }
        let mut grouped = BTreeSet::new();
        for (g, group) in self.open_plan.iter().enumerate() {
            for (j, &r) in group.iter().enumerate() {
                if r >= k {
                    return Err(invalid(
                        format!("open_plan[{g}][{j}]"),
                        "room index out of range",
                    ));
                }
                if !grouped.insert(r) {
                    return Err(invalid(
                        format!("open_plan[{g}][{j}]"),
                        "room listed in more than one open-plan group",
                    ));
                }
            }
        }

        if self.objectives.is_empty() {
            return Err(invalid("objectives", "at least one objective required"));
        }
        let distinct: BTreeSet<_> = self.objectives.iter().collect();
        if distinct.len() != self.objectives.len() {
            return Err(invalid("objectives", "duplicate objective"));
        }

        for (i, d) in self.light_directions.iter_mut().enumerate() {
            let len = d.x.hypot(d.y);
            if !(len.is_finite() && len > 0.0) {
                return Err(invalid(
                    format!("light_directions[{i}]"),
                    "zero-length light vector",
                ));
            }
            if (len - 1.0).abs() > 1e-12 {
                *d = Point::new(d.x / len, d.y / len);
            }
        }
        if self.objectives.contains(&Objective::Shadow) && self.light_directions.is_empty() {
            return Err(invalid(
                "light_directions",
                "shadow objective requires at least one light direction",
            ));
        }
        Ok(self)
    }

    fn normalize_envelope(&mut self) -> Result<(), SpecError> {
        if self.envelope.len() > 1 && self.envelope.first() == self.envelope.last() {
            self.envelope.pop();
        }
        if self.envelope.len() < 4 {
            return Err(invalid("envelope", "needs at least four vertices"));
        }
        if signed_area(&self.envelope) < 0.0 {
            self.envelope.reverse();
        }
        Ok(())
    }

    fn check_envelope(&self) -> Result<(), SpecError> {
        let ring = &self.envelope;
        let n = ring.len();
        if ring.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(invalid("envelope", "non-finite coordinate"));
        }
        let edges: Vec<Segment> = ring_edges(ring).collect();
        for (i, e) in edges.iter().enumerate() {
            if e.length() <= LENGTH_TOL {
                return Err(invalid(format!("envelope[{i}]"), "zero-length edge"));
            }
            if !(e.is_horizontal() || e.is_vertical()) {
                return Err(invalid(format!("envelope[{i}]"), "edge is not axis-aligned"));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (a, b) = (&edges[i], &edges[j]);
                if adjacent {
                    // consecutive edges may only share their joint vertex
                    let (first, second) = if j == i + 1 { (a, b) } else { (b, a) };
                    let d1 = (first.b.x - first.a.x, first.b.y - first.a.y);
                    let d2 = (second.b.x - second.a.x, second.b.y - second.a.y);
                    let cross = d1.0 * d2.1 - d1.1 * d2.0;
                    let dot = d1.0 * d2.0 + d1.1 * d2.1;
                    if cross.abs() <= LENGTH_TOL && dot < 0.0 {
                        return Err(invalid("envelope", "edges fold back on themselves"));
                    }
                } else if b.intersect_param(a.a, a.b).is_some() {
                    return Err(invalid("envelope", "envelope is self-intersecting"));
                }
            }
        }
        if signed_area(ring).abs() <= LENGTH_TOL {
            return Err(invalid("envelope", "envelope has no area"));
        }
        Ok(())
    }

    /// All fenestration segments, honouring `all_windows`.
    pub fn window_segments(&self) -> Vec<Segment> {
        if self.all_windows && self.windows.is_empty() {
            ring_edges(&self.envelope).collect()
        } else {
            self.windows.iter().map(Window::segment).collect()
        }
    }

    /// Open-plan group id per room, if any.
    pub fn open_plan_group(&self, room: usize) -> Option<usize> {
        self.open_plan.iter().position(|g| g.contains(&room))
    }

    /// Canonical JSON text of this spec (sorted keys, newline-terminated).
    pub fn canonical_json(&self) -> String {
        crate::io::canonical_json(self).expect("spec serialises")
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn fingerprint(&self) -> String {
        crate::io::sha256_hex(self.canonical_json().as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "envelope": [[0,0],[12,0],[12,10],[0,10]],
        "entrances": [[6,0]],
        "rooms": [{"name": "living", "kind": "living", "width": [4,5], "height": [4,6]}],
        "cell_size": 1.0,
        "objectives": ["area_minus_conflict"]
    }"#;

    fn with(patch: impl FnOnce(&mut serde_json::Value)) -> Result<DesignSpec, SpecError> {
        let mut v: serde_json::Value = serde_json::from_str(MINIMAL).unwrap();
        patch(&mut v);
        parse_spec(&v.to_string())
    }

    #[test]
    fn minimal_spec_loads() {
        let spec = load_spec(MINIMAL.as_bytes()).unwrap();
        assert_eq!(spec.rooms.len(), 1);
        assert_eq!(spec.path_width, 1.0);
        assert!(spec.rooms[0].is_habitable());
        assert_eq!(spec.objectives, vec![Objective::AreaMinusConflict]);
        let again = parse_spec(&spec.canonical_json()).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn reversed_range_rejected() {
        let err = with(|v| v["rooms"][0]["width"] = serde_json::json!([5, 3])).unwrap_err();
        assert!(err.to_string().contains("range lo > hi"), "{err}");
        assert!(err.to_string().contains("rooms[0].width"), "{err}");
    }

    #[test]
    fn window_off_envelope_rejected() {
        let err = with(|v| v["windows"] = serde_json::json!([{"edge": [[1, 1], [3, 1]]}]))
            .unwrap_err();
        assert!(matches!(err, SpecError::Invalid { .. }), "{err}");
        with(|v| v["windows"] = serde_json::json!([{"edge": [[1, 0], [3, 0]]}])).unwrap();
    }

    #[test]
    fn unknown_objective_rejected() {
        let err = with(|v| v["objectives"] = serde_json::json!(["beauty"])).unwrap_err();
        assert!(matches!(err, SpecError::UnknownObjective(ref n) if n == "beauty"));
    }

    #[test]
    fn interior_entrance_rejected() {
        assert!(with(|v| v["entrances"] = serde_json::json!([[6, 5]])).is_err());
        assert!(with(|v| v["entrances"] = serde_json::json!([])).is_err());
    }

    #[test]
    fn bad_indices_rejected() {
        assert!(with(|v| v["adjacency"] = serde_json::json!([[0, 1]])).is_err());
        assert!(with(|v| v["open_plan"] = serde_json::json!([[0, 3]])).is_err());
    }

    #[test]
    fn diagonal_and_self_intersecting_envelopes_rejected() {
        assert!(with(|v| v["envelope"] = serde_json::json!([[0, 0], [12, 0], [10, 10], [0, 10]]))
            .is_err());
        // bow-tie made of axis-aligned edges
        let bowtie = serde_json::json!([[0, 0], [4, 0], [4, 4], [2, 4], [2, -2], [0, -2]]);
        assert!(with(|v| v["envelope"] = bowtie).is_err());
    }

    #[test]
    fn clockwise_envelope_is_reoriented() {
        let spec = with(|v| v["envelope"] = serde_json::json!([[0, 0], [0, 10], [12, 10], [12, 0]]))
            .unwrap();
        assert!(signed_area(&spec.envelope) > 0.0);
    }

    #[test]
    fn shadow_needs_light_and_normalises_it() {
        assert!(with(|v| v["objectives"] = serde_json::json!(["shadow"])).is_err());
        let spec = with(|v| {
            v["objectives"] = serde_json::json!(["shadow"]);
            v["light_directions"] = serde_json::json!([[0, 2]]);
        })
        .unwrap();
        assert_eq!(spec.light_directions[0], Point::new(0.0, 1.0));
        assert!(with(|v| {
            v["objectives"] = serde_json::json!(["shadow"]);
            v["light_directions"] = serde_json::json!([[0, 0]]);
        })
        .is_err());
    }

    #[test]
    fn all_windows_flag_marks_every_edge() {
        let spec = with(|v| v["all_windows"] = serde_json::json!(true)).unwrap();
        assert_eq!(spec.window_segments().len(), 4);
    }
}
