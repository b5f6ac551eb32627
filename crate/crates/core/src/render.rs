//! Minimal SVG rendering of a cell, its routes and the pattern lines,
//! with optional vertical exaggeration.

use crate::geom::Point;
use crate::line_process::LinePattern;
use crate::routes::{semi_perimeter_routes, Cell};
use crate::Result;

/// Render the pattern (grey), the cell boundary (black), the two routes
/// (blue/orange) and the maximum-displacement vertex (red dot), with the
/// y axis exaggerated by `y_scale`.
pub fn cell_svg(cell: &Cell, pattern: &LinePattern, y_scale: f64) -> Result<String> {
    let (upper, lower) = semi_perimeter_routes(cell)?;
    let ld = crate::routes::max_lateral_displacement(cell)?;
    let n = cell.p_minus.dist(&cell.p_plus);

    let pad = 0.1 * n;
    let ys = |y: f64| -y * y_scale; // svg y grows downward
    let min_x = -pad;
    let max_x = n + pad;
    let half_h = (ld.v.abs() * n.sqrt() * y_scale * 2.0).max(0.2 * n);

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        min_x,
        -half_h,
        max_x - min_x,
        2.0 * half_h
    ));
    // pattern lines clipped to the viewport by drawing long chords
    let span = 4.0 * (max_x - min_x);
    for l in pattern.lines.iter().chain(pattern.conditioned.iter()) {
        let p0 = l.point_on();
        let (dx, dy) = l.direction();
        s.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bbbbbb\" stroke-width=\"{}\"/>\n",
            p0.x - span * dx,
            ys(p0.y - span * dy),
            p0.x + span * dx,
            ys(p0.y + span * dy),
            0.001 * span
        ));
    }
    let poly_pts = |pts: &[Point]| -> String {
        pts.iter()
            .map(|p| format!("{},{}", p.x, ys(p.y)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    s.push_str(&format!(
        "  <polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\"/>\n",
        poly_pts(cell.polygon.vertices()),
        0.002 * span
    ));
    for (route, color) in [(&upper, "#1f77b4"), (&lower, "#ff7f0e")] {
        s.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
            poly_pts(&route.polyline),
            color,
            0.0025 * span
        ));
    }
    s.push_str(&format!(
        "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#d62728\"/>\n",
        ld.u * n,
        ys(ld.v * n.sqrt()),
        0.004 * span
    ));
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;
    use crate::routes::{build_cell, WindowPolicy};

    #[test]
    fn svg_smoke() {
        let cell = build_cell(
            &Point::new(0.0, 0.0),
            &Point::new(64.0, 0.0),
            RngStream::new(71, 0),
            &WindowPolicy::default(),
        )
        .unwrap();
        let pat = crate::line_process::sample_pattern(
            &crate::line_process::DiskWindow::new(Point::new(32.0, 0.0), 96.0),
            RngStream::new(71, 1),
        );
        let svg = cell_svg(&cell, &pat, 64.0f64.sqrt() / 4.0).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("polygon"));
        assert!(svg.contains("circle"));
    }
}
