//! Exact planar primitives shared by every sampler: lines in (r, θ) form,
//! segments, side tests, crossing/separation predicates, half-plane
//! clipping and polygon measurements.
//!
//! Conventions: a [`Line`] stores the signed perpendicular distance `r`
//! from the origin and the angle `theta ∈ [0,π)` the line makes with the
//! x-axis. The unit normal is the direction rotated by +90°,
//! `n(θ) = (−sin θ, cos θ)`, so the line is `{p : p·n = r}` and the x-axis
//! is `{r: 0, theta: 0}` with the upper half-plane on the positive side.

use crate::{Error, Result};

/// Collinearity tolerance used by [`side_of`] only: absolute, in length
/// units, valid for coordinate scales up to about 1e4.
pub const SIDE_TOL: f64 = 1e-12;

/// Vertices closer than this are merged when clipping produces near
/// duplicates (fixture-only; Poisson patterns are in general position).
const DEDUP_EPS: f64 = 1e-7;

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }
}

/// An undirected planar line in (r, θ) form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    /// Signed perpendicular distance from the origin.
    pub r: f64,
    /// Angle with the x-axis, in `[0, π)`.
    pub theta: f64,
}

impl Line {
    pub fn new(r: f64, theta: f64) -> Self {
        Line { r, theta }
    }

    /// Unit normal `(−sin θ, cos θ)`.
    pub fn normal(&self) -> (f64, f64) {
        (-self.theta.sin(), self.theta.cos())
    }

    /// Unit direction `(cos θ, sin θ)` along the line.
    pub fn direction(&self) -> (f64, f64) {
        (self.theta.cos(), self.theta.sin())
    }

    /// The foot of the perpendicular from the origin; a point on the line.
    pub fn point_on(&self) -> Point {
        let (nx, ny) = self.normal();
        Point::new(self.r * nx, self.r * ny)
    }

    /// Line through two distinct points.
    pub fn through(a: Point, b: Point) -> Self {
        let mut theta = (b.y - a.y).atan2(b.x - a.x);
        if theta < 0.0 {
            theta += std::f64::consts::PI;
        }
        if theta >= std::f64::consts::PI {
            theta -= std::f64::consts::PI;
        }
        let (nx, ny) = (-theta.sin(), theta.cos());
        Line::new(a.x * nx + a.y * ny, theta)
    }

    /// Raw signed distance from `p` to the line (no tolerance applied).
    pub fn signed_distance(&self, p: &Point) -> f64 {
        let (nx, ny) = self.normal();
        p.x * nx + p.y * ny - self.r
    }
}

/// A segment with distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        debug_assert!(a != b, "segment endpoints must differ");
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(&self.b)
    }

    pub fn midpoint(&self) -> Point {
        self.a.midpoint(&self.b)
    }
}

/// Side of a line: sign of the signed distance, with distances within
/// [`SIDE_TOL`] collapsed to zero.
pub fn side_of(line: &Line, p: &Point) -> i8 {
    let d = line.signed_distance(p);
    if d > SIDE_TOL {
        1
    } else if d < -SIDE_TOL {
        -1
    } else {
        0
    }
}

/// Does the line meet the closed segment? Implemented as
/// `side_of(a) * side_of(b) <= 0`.
pub fn crosses(line: &Line, s: &Segment) -> bool {
    i32::from(side_of(line, &s.a)) * i32::from(side_of(line, &s.b)) <= 0
}

/// Does the line strictly separate the point `p` from the segment `s`,
/// i.e. cross both `p–s.a` and `p–s.b`? Returns false when `p` lies on
/// the line.
pub fn separates(line: &Line, p: &Point, s: &Segment) -> bool {
    let sp = side_of(line, p);
    if sp == 0 {
        return false;
    }
    let sa = i32::from(side_of(line, &s.a));
    let sb = i32::from(side_of(line, &s.b));
    let sp = i32::from(sp);
    sp * sa <= 0 && sp * sb <= 0
}

/// A strictly convex polygon with counter-clockwise vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Validates ≥3 vertices, counter-clockwise orientation, convexity up
    /// to tolerance and absence of repeated vertices.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidInput("polygon needs at least 3 vertices".into()));
        }
        let k = vertices.len();
        for i in 0..k {
            let a = vertices[i];
            let b = vertices[(i + 1) % k];
            let c = vertices[(i + 2) % k];
            if a.dist(&b) < DEDUP_EPS {
                return Err(Error::InvalidInput("repeated vertex".into()));
            }
            let cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
            // scale-aware strictness: allow round-off level deviations
            let scale = a.dist(&b) * b.dist(&c);
            if cross < -1e-9 * scale.max(1.0) {
                return Err(Error::InvalidInput(
                    "vertices not counter-clockwise convex".into(),
                ));
            }
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Axis-aligned square, counter-clockwise.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        ConvexPolygon {
            vertices: vec![
                Point::new(x0, y0),
                Point::new(x1, y0),
                Point::new(x1, y1),
                Point::new(x0, y1),
            ],
        }
    }
}

/// Perimeter, shoelace area and the highest vertex of a polygon.
#[derive(Debug, Clone, Copy)]
pub struct PolygonStats {
    pub perimeter: f64,
    pub area: f64,
    pub max_y_vertex: Point,
    pub max_y_index: usize,
}

/// Exact shoelace area, summed edge lengths and the vertex of maximal y
/// (ties broken by smaller x).
pub fn polygon_stats(poly: &ConvexPolygon) -> PolygonStats {
    let v = poly.vertices();
    let k = v.len();
    let mut per = 0.0;
    let mut area2 = 0.0;
    let mut best = 0usize;
    for i in 0..k {
        let a = v[i];
        let b = v[(i + 1) % k];
        per += a.dist(&b);
        area2 += a.x * b.y - b.x * a.y;
        let c = v[best];
        if a.y > c.y || (a.y == c.y && a.x < c.x) {
            best = i;
        }
    }
    PolygonStats {
        perimeter: per,
        area: 0.5 * area2,
        max_y_vertex: v[best],
        max_y_index: best,
    }
}

/// Clip a convex polygon by the closed half-plane bounded by `line` that
/// contains `keep`.
pub fn clip_halfplane(poly: &ConvexPolygon, line: &Line, keep: &Point) -> Result<ConvexPolygon> {
    let keep_side = side_of(line, keep);
    if keep_side == 0 {
        return Err(Error::InvalidInput("keep point lies on the clipping line".into()));
    }
    let tags = vec![(); poly.len()];
    match clip_edges(poly.vertices(), &tags, line, f64::from(keep_side), ()) {
        Some((pts, _)) => ConvexPolygon::new(pts),
        None => Err(Error::EmptyIntersection),
    }
}

/// Sutherland–Hodgman step on a convex polygon carrying one tag per edge
/// (edge i runs from vertex i to vertex i+1). The freshly cut edge gets
/// `cut_tag`; surviving edges keep theirs. Returns `None` when nothing of
/// the polygon lies on the kept side.
pub(crate) fn clip_edges<T: Copy>(
    pts: &[Point],
    tags: &[T],
    line: &Line,
    keep_sign: f64,
    cut_tag: T,
) -> Option<(Vec<Point>, Vec<T>)> {
    let k = pts.len();
    let mut s = Vec::with_capacity(k);
    let mut all_in = true;
    let mut all_out = true;
    for p in pts {
        let d = line.signed_distance(p) * keep_sign;
        if d > SIDE_TOL {
            all_out = false;
        } else if d < -SIDE_TOL {
            all_in = false;
        }
        s.push(d);
    }
    if all_in {
        return Some((pts.to_vec(), tags.to_vec()));
    }
    if all_out {
        return None;
    }
    let mut out_pts: Vec<Point> = Vec::with_capacity(k + 2);
    let mut out_tags: Vec<T> = Vec::with_capacity(k + 2);
    let push = |p: Point, t: T, out_pts: &mut Vec<Point>, out_tags: &mut Vec<T>| {
        if let Some(last) = out_pts.last() {
            if last.dist(&p) < DEDUP_EPS {
                return;
            }
        }
        out_pts.push(p);
        out_tags.push(t);
    };
    for j in 0..k {
        let (pj, sj) = (pts[j], s[j]);
        let (pn, sn) = (pts[(j + 1) % k], s[(j + 1) % k]);
        let inter = |sj: f64, sn: f64| -> Point {
            let t = sj / (sj - sn);
            Point::new(pj.x + t * (pn.x - pj.x), pj.y + t * (pn.y - pj.y))
        };
        if sj >= -SIDE_TOL {
            push(pj, tags[j], &mut out_pts, &mut out_tags);
            if sn < -SIDE_TOL && sj > SIDE_TOL {
                push(inter(sj, sn), cut_tag, &mut out_pts, &mut out_tags);
            } else if sn < -SIDE_TOL {
                // pj effectively on the line: the cut starts here
                if let Some(t) = out_tags.last_mut() {
                    *t = cut_tag;
                }
            }
        } else if sn > SIDE_TOL {
            push(inter(sj, sn), tags[j], &mut out_pts, &mut out_tags);
        }
    }
    // closing edge may duplicate the first vertex
    if out_pts.len() >= 2 && out_pts[0].dist(out_pts.last().unwrap()) < DEDUP_EPS {
        out_pts.pop();
        out_tags.pop();
    }
    if out_pts.len() < 3 {
        return None;
    }
    Some((out_pts, out_tags))
}
