//! Planar primitives for rectilinear envelopes.

use serde::{Deserialize, Serialize};

/// Length tolerance (metres) used for on-segment and collinearity tests.
pub const LENGTH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn is_horizontal(&self) -> bool {
        (self.a.y - self.b.y).abs() <= LENGTH_TOL
    }

    pub fn is_vertical(&self) -> bool {
        (self.a.x - self.b.x).abs() <= LENGTH_TOL
    }

    /// Closed containment test for a point on an axis-aligned segment.
    pub fn contains(&self, p: Point) -> bool {
        let (lo_x, hi_x) = minmax(self.a.x, self.b.x);
        let (lo_y, hi_y) = minmax(self.a.y, self.b.y);
        p.x >= lo_x - LENGTH_TOL
            && p.x <= hi_x + LENGTH_TOL
            && p.y >= lo_y - LENGTH_TOL
            && p.y <= hi_y + LENGTH_TOL
            && self.distance_to(p) <= LENGTH_TOL
    }

    /// True when `other` is collinear with and lies within this segment.
    pub fn covers(&self, other: &Segment) -> bool {
        self.contains(other.a) && self.contains(other.b)
    }

    pub fn distance_to(&self, p: Point) -> f64 {
        let dx = self.b.x - self.a.x;
        let dy = self.b.y - self.a.y;
        let len2 = dx * dx + dy * dy;
        if len2 == 0.0 {
            return self.a.distance(p);
        }
        let t = (((p.x - self.a.x) * dx + (p.y - self.a.y) * dy) / len2).clamp(0.0, 1.0);
        Point::new(self.a.x + t * dx, self.a.y + t * dy).distance(p)
    }

    /// Parameter `t` along `from -> to` where the two segments first meet, if they do.
    pub fn intersect_param(&self, from: Point, to: Point) -> Option<f64> {
        let r = (to.x - from.x, to.y - from.y);
        let s = (self.b.x - self.a.x, self.b.y - self.a.y);
        let denom = r.0 * s.1 - r.1 * s.0;
        let qp = (self.a.x - from.x, self.a.y - from.y);
        if denom.abs() < 1e-15 {
            // parallel: only collinear overlap counts
            if (qp.0 * r.1 - qp.1 * r.0).abs() > 1e-12 {
                return None;
            }
            let rr = r.0 * r.0 + r.1 * r.1;
            if rr == 0.0 {
                return self.contains(from).then_some(0.0);
            }
            let t0 = (qp.0 * r.0 + qp.1 * r.1) / rr;
            let t1 = t0 + (s.0 * r.0 + s.1 * r.1) / rr;
            let (lo, hi) = minmax(t0, t1);
            if hi < 0.0 || lo > 1.0 {
                return None;
            }
            return Some(lo.max(0.0));
        }
        let t = (qp.0 * s.1 - qp.1 * s.0) / denom;
        let u = (qp.0 * r.1 - qp.1 * r.0) / denom;
        let eps = 1e-12;
        if (-eps..=1.0 + eps).contains(&t) && (-eps..=1.0 + eps).contains(&u) {
            Some(t.clamp(0.0, 1.0))
        } else {
            None
        }
    }
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Signed shoelace area; positive for counterclockwise rings.
pub fn signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    let mut acc = 0.0;
    for i in 0..n {
        let p = ring[i];
        let q = ring[(i + 1) % n];
        acc += p.x * q.y - q.x * p.y;
    }
    acc / 2.0
}

pub fn ring_edges(ring: &[Point]) -> impl Iterator<Item = Segment> + '_ {
    let n = ring.len();
    (0..n).map(move |i| Segment::new(ring[i], ring[(i + 1) % n]))
}

pub fn on_boundary(ring: &[Point], p: Point) -> bool {
    ring_edges(ring).any(|e| e.contains(p))
}

/// Strict interior test: points on the boundary are outside.
pub fn strictly_inside(ring: &[Point], p: Point) -> bool {
    if on_boundary(ring, p) {
        return false;
    }
    let mut inside = false;
    for e in ring_edges(ring) {
        let (a, b) = (e.a, e.b);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Axis-aligned bounding box as (min, max).
pub fn bounding_box(ring: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in ring {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}
