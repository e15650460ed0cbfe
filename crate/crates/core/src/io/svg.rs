//! SVG drawings of layout documents.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use super::document::{CellRef, LayoutDocument};
use crate::geometry::{bounding_box, Point};
use crate::grid::Grid;
use crate::spec::{DesignSpec, RoomKind};

/// Drawing scale.
pub const PX_PER_METRE: f64 = 20.0;
const MARGIN: f64 = 20.0;

fn kind_fill(kind: RoomKind) -> &'static str {
    match kind {
        RoomKind::Living => "#f4d58d",
        RoomKind::Dining => "#f2b880",
        RoomKind::Bedroom => "#a8c5e2",
        RoomKind::Bathroom => "#9fd8cb",
        RoomKind::Kitchen => "#e8a0a0",
        RoomKind::Study => "#c3b1e1",
        RoomKind::Lift => "#b0b0b0",
        RoomKind::Other => "#d9d9d9",
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

struct Canvas {
    min: Point,
    max: Point,
}

impl Canvas {
    fn x(&self, x: f64) -> f64 {
        MARGIN + (x - self.min.x) * PX_PER_METRE
    }

    fn y(&self, y: f64) -> f64 {
        MARGIN + (self.max.y - y) * PX_PER_METRE
    }

    fn width(&self) -> f64 {
        2.0 * MARGIN + (self.max.x - self.min.x) * PX_PER_METRE
    }

    fn height(&self) -> f64 {
        2.0 * MARGIN + (self.max.y - self.min.y) * PX_PER_METRE
    }

    fn line(&self, out: &mut String, class: &str, a: Point, b: Point) {
        let _ = writeln!(
            out,
            r#"  <line class="{class}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
            self.x(a.x),
            self.y(a.y),
            self.x(b.x),
            self.y(b.y)
        );
    }
}

fn cell_corner(grid: &Grid, c: i64, r: i64) -> Point {
    Point::new(
        grid.origin.x + c as f64 * grid.cell_size,
        grid.origin.y + r as f64 * grid.cell_size,
    )
}

/// Render a layout document as SVG 1.1.
pub fn render_svg(doc: &LayoutDocument, grid: &Grid, spec: &DesignSpec) -> String {
    let (min, max) = bounding_box(&spec.envelope);
    let cv = Canvas { min, max };
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.2}" height="{:.2}" viewBox="0 0 {:.2} {:.2}">"#,
        cv.width(),
        cv.height(),
        cv.width(),
        cv.height()
    );
    let _ = writeln!(out, r##"  <rect class="background" x="0" y="0" width="{:.2}" height="{:.2}" fill="#ffffff"/>"##, cv.width(), cv.height());

    // open-plan members share the fill of the group's first room
    let fill_of = |room: usize| -> &'static str {
        let lead = spec
            .open_plan_group(room)
            .and_then(|g| spec.open_plan[g].iter().min().copied())
            .unwrap_or(room);
        kind_fill(spec.rooms[lead].kind)
    };

    for (i, room) in doc.rooms.iter().enumerate() {
        for polygon in &room.outlines {
            let mut d = String::new();
            for ring in polygon {
                for (k, p) in ring.iter().enumerate() {
                    let _ = write!(d, "{}{:.2} {:.2} ", if k == 0 { "M" } else { "L" }, cv.x(p.x), cv.y(p.y));
                }
                d.push_str("Z ");
            }
            let _ = writeln!(
                out,
                r#"  <path class="room" fill="{}" fill-rule="evenodd" stroke="none" d="{}"/>"#,
                fill_of(i),
                d.trim_end()
            );
        }
    }

    let s = grid.cell_size;
    for &[c, r] in &doc.corridor_cells {
        let lo = cell_corner(grid, c as i64, r as i64 + 1);
        let _ = writeln!(
            out,
            r##"  <rect class="corridor" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#eeeeee" stroke="none"/>"##,
            cv.x(lo.x),
            cv.y(lo.y),
            s * PX_PER_METRE,
            s * PX_PER_METRE
        );
    }

    // walls: every room-cell face whose neighbour belongs to a different wall group
    let wall_group = |room: usize| spec.open_plan_group(room).map_or(room, |g| spec.rooms.len() + g);
    let mut owner: BTreeMap<CellRef, usize> = BTreeMap::new();
    for (i, room) in doc.rooms.iter().enumerate() {
        for &cell in &room.cells {
            owner.entry(cell).or_insert(i);
        }
    }
    let mut walls: BTreeSet<(i64, i64, i64, i64)> = BTreeSet::new();
    for (&[c, r], &room) in &owner {
        let (c, r) = (c as i64, r as i64);
        let faces = [
            ((c, r - 1), (c, r, c + 1, r)),
            ((c + 1, r), (c + 1, r, c + 1, r + 1)),
            ((c, r + 1), (c, r + 1, c + 1, r + 1)),
            ((c - 1, r), (c, r, c, r + 1)),
        ];
        for ((nc, nr), face) in faces {
            let other = if nc < 0 || nr < 0 {
                None
            } else {
                owner.get(&[nc as usize, nr as usize]).copied()
            };
            if other.is_none_or(|o| wall_group(o) != wall_group(room)) {
                walls.insert(face);
            }
        }
    }
    for (c1, r1, c2, r2) in walls {
        cv.line(&mut out, "wall", cell_corner(grid, c1, r1), cell_corner(grid, c2, r2));
    }

    let mut env = String::new();
    for p in &spec.envelope {
        let _ = write!(env, "{:.2},{:.2} ", cv.x(p.x), cv.y(p.y));
    }
    let _ = writeln!(
        out,
        r##"  <polygon class="envelope" points="{}" fill="none" stroke="#222222" stroke-width="3"/>"##,
        env.trim_end()
    );
    for w in spec.window_segments() {
        cv.line(&mut out, "window", w.a, w.b);
    }

    for room in &doc.rooms {
        if let Some([c, r]) = room.entrance {
            let p = grid.center(grid.id(c, r).expect("entrance cell lies on the grid"));
            let _ = writeln!(
                out,
                r##"  <circle class="entrance" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="#cc3333"/>"##,
                cv.x(p.x),
                cv.y(p.y),
                0.2 * s * PX_PER_METRE
            );
        }
    }
    if !doc.rooms.iter().all(|r| r.cells.is_empty()) {
        let [c, r] = doc.entry;
        let p = grid.center(grid.id(c, r).expect("entry cell lies on the grid"));
        let half = 0.3 * s * PX_PER_METRE;
        let _ = writeln!(
            out,
            r##"  <rect class="entry" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#3355cc"/>"##,
            cv.x(p.x) - half,
            cv.y(p.y) - half,
            2.0 * half,
            2.0 * half
        );
    }

    for room in &doc.rooms {
        if room.cells.is_empty() {
            continue;
        }
        let n = room.cells.len() as f64;
        let (sx, sy) = room.cells.iter().fold((0.0, 0.0), |(sx, sy), &[c, r]| {
            let p = grid.center(grid.id(c, r).expect("room cell lies on the grid"));
            (sx + p.x, sy + p.y)
        });
        let _ = writeln!(
            out,
            r#"  <text class="label" x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            cv.x(sx / n),
            cv.y(sy / n),
            escape(&room.name)
        );
    }
    out.push_str("</svg>\n");
    out
}
