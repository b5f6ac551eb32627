//! Cell construction between two nodes and the semi-perimeter routes it
//! induces.
//!
//! The cell is the intersection of the half-planes, one per pattern line
//! that does not separate the two nodes, each taken on the segment's
//! side. A route leaves the source in the direction opposite to the
//! destination, follows the cell boundary around one side until it meets
//! the forward ray, then runs down that ray to the destination; its
//! excess over the straight-line distance is the quantity of interest.

use crate::geom::{clip_edges, side_of, ConvexPolygon, Line, Point, Segment};
use crate::line_process::{sample_pattern, DiskWindow, LinePattern};
use crate::numerics::RngStream;
use crate::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use std::f64::consts::{E, PI};

/// Edge provenance sentinel: edges still lying on the initial bounding
/// box carry this tag; genuine cell edges carry their line index.
const BOX_TAG: u32 = u32::MAX;

/// Window enlargement policy for [`build_cell`].
///
/// The initial window is a disk at the segment midpoint whose radius
/// covers the high-probability lateral range `O(sqrt(n log n))`; when the
/// cell is not closed, the radius doubles and fresh lines are superposed
/// in the annulus only, preserving the realization already drawn.
#[derive(Debug, Clone, Copy)]
pub struct WindowPolicy {
    pub max_doublings: u32,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy { max_doublings: 6 }
    }
}

impl WindowPolicy {
    pub fn initial_radius(&self, dist: f64) -> f64 {
        (1.5 * dist).max(0.5 * dist + 6.0 * (dist * (dist + E).ln()).sqrt())
    }
}

/// The convex cell around the segment `p⁻p⁺`, with provenance.
#[derive(Debug, Clone)]
pub struct Cell {
    pub polygon: ConvexPolygon,
    pub p_minus: Point,
    pub p_plus: Point,
    pub generating_window_radius: f64,
    /// True iff every polygon edge lies on a pattern line (none on the
    /// clipping box) and the polygon sits inside the generating window.
    pub bounded: bool,
}

/// Which side of the source→destination axis a route runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteSide {
    Upper,
    Lower,
}

/// A semi-perimeter route from `p⁻` to `p⁺`.
#[derive(Debug, Clone)]
pub struct Route {
    pub polyline: Vec<Point>,
    pub side: RouteSide,
    pub length: f64,
    pub excess: f64,
}

/// Location `(u, v)` of the maximum lateral displacement in limit
/// scaling: the peak boundary vertex sits at `(n·u, sqrt(n)·v)` in the
/// axis frame of the cell.
#[derive(Debug, Clone, Copy)]
pub struct LateralDisplacement {
    pub u: f64,
    pub v: f64,
    pub n: f64,
}

fn build_from_lines(
    p_minus: &Point,
    p_plus: &Point,
    lines: &[Line],
    center: &Point,
    radius: f64,
) -> Option<(ConvexPolygon, bool)> {
    let mid = p_minus.midpoint(p_plus);
    let mut pts = vec![
        Point::new(center.x - radius, center.y - radius),
        Point::new(center.x + radius, center.y - radius),
        Point::new(center.x + radius, center.y + radius),
        Point::new(center.x - radius, center.y + radius),
    ];
    let mut tags = vec![BOX_TAG; 4];

    // near lines first: the polygon shrinks quickly and later clips are
    // cheap no-ops
    let mut order: Vec<(f64, u32)> = lines
        .iter()
        .enumerate()
        .map(|(i, l)| (l.signed_distance(&mid).abs(), i as u32))
        .collect();
    order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

    let seg = Segment::new(*p_minus, *p_plus);
    for (_, idx) in order {
        let line = &lines[idx as usize];
        let sm = side_of(line, &mid);
        if sm == 0 || crate::geom::crosses(line, &seg) {
            continue; // separating (or through-midpoint) lines are deleted
        }
        match clip_edges(&pts, &tags, line, f64::from(sm), idx) {
            Some((np, nt)) => {
                pts = np;
                tags = nt;
            }
            None => return None, // cannot happen: the segment side survives
        }
    }
    let all_pattern = tags.iter().all(|&t| t != BOX_TAG);
    let inside = pts
        .iter()
        .all(|p| center.dist(p) <= radius * (1.0 + 1e-12) + 1e-9);
    let poly = ConvexPolygon::new(pts).ok()?;
    Some((poly, all_pattern && inside))
}

/// Build the cell from an explicit pattern (fixtures, regression tests,
/// coupling experiments). Only unconditioned lines participate.
pub fn cell_from_pattern(p_minus: &Point, p_plus: &Point, pattern: &LinePattern) -> Result<Cell> {
    if p_minus == p_plus {
        return Err(Error::InvalidInput("cell endpoints must differ".into()));
    }
    let (polygon, bounded) = build_from_lines(
        p_minus,
        p_plus,
        &pattern.lines,
        &pattern.window.center,
        pattern.window.radius,
    )
    .ok_or_else(|| Error::DegenerateCell("clip emptied the polygon".into()))?;
    Ok(Cell {
        polygon,
        p_minus: *p_minus,
        p_plus: *p_plus,
        generating_window_radius: pattern.window.radius,
        bounded,
    })
}

/// Sample a pattern around the segment and build the cell, enlarging the
/// window by annulus superposition until the cell closes.
pub fn build_cell(p_minus: &Point, p_plus: &Point, stream: RngStream, policy: &WindowPolicy) -> Result<Cell> {
    if p_minus == p_plus {
        return Err(Error::InvalidInput("cell endpoints must differ".into()));
    }
    let center = p_minus.midpoint(p_plus);
    let dist = p_minus.dist(p_plus);
    let mut radius = policy.initial_radius(dist);

    let base = sample_pattern(&DiskWindow::new(center, radius), stream);
    let mut lines = base.lines;
    let mut doublings = 0u32;
    loop {
        if let Some((polygon, bounded)) = build_from_lines(p_minus, p_plus, &lines, &center, radius) {
            if bounded {
                return Ok(Cell {
                    polygon,
                    p_minus: *p_minus,
                    p_plus: *p_plus,
                    generating_window_radius: radius,
                    bounded,
                });
            }
        }
        if doublings >= policy.max_doublings {
            return Err(Error::UnboundedAtMaxWindow { doublings });
        }
        doublings += 1;
        // fresh lines in the annulus (R, 2R) only: the measure of lines
        // hitting the doubled disk but not the old one is pi*R
        let mut rng = stream.offset(1_000_000 + u64::from(doublings)).rng();
        let extra = Poisson::new(PI * radius).unwrap().sample(&mut rng) as usize;
        for _ in 0..extra {
            let theta = rng.gen::<f64>() * PI;
            let d = radius * (1.0 + rng.gen::<f64>());
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let (nx, ny) = (-theta.sin(), theta.cos());
            lines.push(Line::new(sign * d + center.x * nx + center.y * ny, theta));
        }
        radius *= 2.0;
    }
}

/// Exit point of the ray `origin + t·dir` (t > 0) through the polygon
/// boundary, with the index of the edge it lies on.
fn ray_exit(poly: &ConvexPolygon, origin: &Point, dir: (f64, f64)) -> Option<(Point, usize, f64)> {
    let v = poly.vertices();
    let k = v.len();
    let mut best: Option<(Point, usize, f64)> = None;
    for i in 0..k {
        let a = v[i];
        let b = v[(i + 1) % k];
        let ex = b.x - a.x;
        let ey = b.y - a.y;
        let den = dir.0 * ey - dir.1 * ex;
        if den.abs() < 1e-300 {
            continue;
        }
        let wx = a.x - origin.x;
        let wy = a.y - origin.y;
        let t = (wx * ey - wy * ex) / den;
        let s = (wx * dir.1 - wy * dir.0) / den;
        if t > 0.0 && (-1e-9..=1.0 + 1e-9).contains(&s) {
            let q = Point::new(origin.x + t * dir.0, origin.y + t * dir.1);
            match best {
                Some((_, _, tb)) if tb <= t => {}
                _ => best = Some((q, i, t)),
            }
        }
    }
    best
}

fn polyline_length(pts: &[Point]) -> f64 {
    pts.windows(2).map(|w| w[0].dist(&w[1])).sum()
}

/// The two semi-perimeter routes of a bounded cell.
///
/// `B` is where the backward ray from the source meets the boundary and
/// `F` where the forward ray (through the destination) leaves it; each
/// route is `[p⁻, B, …arc vertices…, F, p⁺]`.
pub fn semi_perimeter_routes(cell: &Cell) -> Result<(Route, Route)> {
    if !cell.bounded {
        return Err(Error::InvalidInput("semi_perimeter_routes needs a bounded cell".into()));
    }
    let dist = cell.p_minus.dist(&cell.p_plus);
    let dir = (
        (cell.p_plus.x - cell.p_minus.x) / dist,
        (cell.p_plus.y - cell.p_minus.y) / dist,
    );
    let back = ray_exit(&cell.polygon, &cell.p_minus, (-dir.0, -dir.1))
        .ok_or_else(|| Error::DegenerateCell("backward ray misses the boundary".into()))?;
    let fwd = ray_exit(&cell.polygon, &cell.p_minus, dir)
        .ok_or_else(|| Error::DegenerateCell("forward ray misses the boundary".into()))?;
    let (b_pt, b_edge, _) = back;
    let (f_pt, f_edge, _) = fwd;
    if b_edge == f_edge {
        return Err(Error::DegenerateCell("rays exit through one edge".into()));
    }
    let v = cell.polygon.vertices();
    let k = v.len();

    let walk = |from_edge: usize, to_edge: usize| -> Vec<Point> {
        let mut arc = Vec::new();
        let mut i = (from_edge + 1) % k;
        loop {
            arc.push(v[i]);
            if i == to_edge {
                break;
            }
            i = (i + 1) % k;
        }
        arc
    };
    // counter-clockwise arcs: B→F and F→B (the latter reversed so both
    // polylines run source→destination)
    let arc1 = walk(b_edge, f_edge);
    let mut arc2 = walk(f_edge, b_edge);
    arc2.reverse();

    let assemble = |arc: Vec<Point>| -> Vec<Point> {
        let mut pts = Vec::with_capacity(arc.len() + 4);
        pts.push(cell.p_minus);
        pts.push(b_pt);
        for p in arc {
            if pts.last().unwrap().dist(&p) > 1e-9 {
                pts.push(p);
            }
        }
        if pts.last().unwrap().dist(&f_pt) > 1e-9 {
            pts.push(f_pt);
        }
        pts.push(cell.p_plus);
        pts
    };
    let p1 = assemble(arc1);
    let p2 = assemble(arc2);

    // classify sides by the midpoint (in arc length) of each boundary arc
    let side_sign = |pts: &[Point]| -> f64 {
        let inner = &pts[1..pts.len() - 1];
        let total = polyline_length(inner);
        let mut acc = 0.0;
        let mut m = inner[0];
        for w in inner.windows(2) {
            let step = w[0].dist(&w[1]);
            if acc + step >= 0.5 * total {
                let t = (0.5 * total - acc) / step;
                m = Point::new(w[0].x + t * (w[1].x - w[0].x), w[0].y + t * (w[1].y - w[0].y));
                break;
            }
            acc += step;
        }
        dir.0 * (m.y - cell.p_minus.y) - dir.1 * (m.x - cell.p_minus.x)
    };
    let mk = |pts: Vec<Point>| -> Route {
        let length = polyline_length(&pts);
        let side = if side_sign(&pts) >= 0.0 {
            RouteSide::Upper
        } else {
            RouteSide::Lower
        };
        Route {
            length,
            excess: length - dist,
            side,
            polyline: pts,
        }
    };
    let r1 = mk(p1);
    let r2 = mk(p2);
    if r1.side == r2.side {
        return Err(Error::DegenerateCell("arcs classify to the same side".into()));
    }
    Ok(if r1.side == RouteSide::Upper { (r1, r2) } else { (r2, r1) })
}

/// Peak of the upper boundary arc in limit scaling.
pub fn max_lateral_displacement(cell: &Cell) -> Result<LateralDisplacement> {
    let (upper, _) = semi_perimeter_routes(cell)?;
    let n = cell.p_minus.dist(&cell.p_plus);
    let dir = (
        (cell.p_plus.x - cell.p_minus.x) / n,
        (cell.p_plus.y - cell.p_minus.y) / n,
    );
    // vertices strictly interior to the polyline are the boundary arc
    let mut best_u = 0.0;
    let mut best_v = f64::NEG_INFINITY;
    for p in &upper.polyline[1..upper.polyline.len() - 1] {
        let rx = p.x - cell.p_minus.x;
        let ry = p.y - cell.p_minus.y;
        let along = rx * dir.0 + ry * dir.1;
        let perp = dir.0 * ry - dir.1 * rx;
        if perp > best_v || (perp == best_v && along < best_u * n) {
            best_v = perp;
            best_u = along / n;
        }
    }
    Ok(LateralDisplacement {
        u: best_u,
        v: best_v / n.sqrt(),
        n,
    })
}

/// Joint limit density of the scaled peak location and height,
/// `f(u,v) = v³/(8 u²(1−u)²) · exp(−v²/(4u(1−u)))` on 0<u<1, v>0.
pub fn lateral_limit_density(u: f64, v: f64) -> Result<f64> {
    if !(0.0 < u && u < 1.0) || !(v > 0.0) {
        return Err(Error::DomainError(format!("lateral_limit_density: (u,v)=({u},{v}) outside 0<u<1, v>0")));
    }
    let q = u * (1.0 - u);
    Ok(0.125 * v.powi(3) / (q * q) * (-v * v / (4.0 * q)).exp())
}

/// Probability that no unit-intensity Poisson line separates `viewpoint`
/// from the segment `p⁻p⁺`: `exp(−½(r+s−ρ))` where r, s are the
/// viewpoint distances and ρ the segment length.
pub fn separation_probability(p_minus: &Point, p_plus: &Point, viewpoint: &Point) -> f64 {
    let r = viewpoint.dist(p_minus);
    let s = viewpoint.dist(p_plus);
    let rho = p_minus.dist(p_plus);
    (-0.5 * (r + s - rho)).exp()
}

/// CSV rows `x,y,role` describing a cell and its route anchor points.
pub fn cell_csv(cell: &Cell) -> Result<String> {
    let (upper, _) = semi_perimeter_routes(cell)?;
    let mut s = String::from("x,y,role\n");
    s.push_str(&format!("{},{},p_minus\n", cell.p_minus.x, cell.p_minus.y));
    s.push_str(&format!("{},{},p_plus\n", cell.p_plus.x, cell.p_plus.y));
    let b = upper.polyline[1];
    let f = upper.polyline[upper.polyline.len() - 2];
    s.push_str(&format!("{},{},ray_back\n", b.x, b.y));
    s.push_str(&format!("{},{},ray_forward\n", f.x, f.y));
    for p in cell.polygon.vertices() {
        s.push_str(&format!("{},{},vertex\n", p.x, p.y));
    }
    Ok(s)
}

/// Fixture pattern: explicit lines wrapped as a pattern on a given window
/// (used by tests and by the coupling regression).
pub fn fixture_pattern(lines: Vec<Line>, window: DiskWindow) -> LinePattern {
    LinePattern {
        lines,
        conditioned: Vec::new(),
        window,
        model: crate::line_process::PatternModel::IsotropicUnit,
        seed_record: RngStream::new(0, 0),
    }
}

/// Mean route statistics over replicated cells at separation n (both
/// routes of each cell contribute).
pub fn excess_samples(n: f64, replicates: u64, stream: RngStream, policy: &WindowPolicy) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    let p_minus = Point::new(0.0, 0.0);
    let p_plus = Point::new(n, 0.0);
    let results: Vec<Result<(f64, f64)>> = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let cell = build_cell(&p_minus, &p_plus, stream.offset(i * 16), policy)?;
            let (upper, lower) = semi_perimeter_routes(&cell)?;
            Ok((upper.excess, lower.excess))
        })
        .collect();
    let mut out = Vec::with_capacity(2 * replicates as usize);
    for r in results {
        let (a, b) = r?;
        out.push(a);
        out.push(b);
    }
    Ok(out)
}

/// Replicated `(u, v)` samples of the scaled maximum lateral displacement.
pub fn lateral_samples(n: f64, replicates: u64, stream: RngStream, policy: &WindowPolicy) -> Result<Vec<(f64, f64)>> {
    use rayon::prelude::*;
    let p_minus = Point::new(0.0, 0.0);
    let p_plus = Point::new(n, 0.0);
    (0..replicates)
        .into_par_iter()
        .map(|i| {
            let cell = build_cell(&p_minus, &p_plus, stream.offset(i * 16), policy)?;
            let ld = max_lateral_displacement(&cell)?;
            Ok((ld.u, ld.v))
        })
        .collect()
}
