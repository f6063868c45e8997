//! Static SVG figure: range boundary, polar boundary, and eigenvalue
//! markers on one auto-scaled viewport.

use crate::numrange::{ConvexPolygon, Point};

const SIDE: f64 = 640.0;
const MARGIN: f64 = 48.0;

/// Renders the combined figure.  Any layer may be absent; the viewport is
/// the bounding box of whatever is present (plus the origin when a polar is
/// drawn, since polars are star-shaped around it), scaled uniformly.
pub fn render(
    boundary: Option<&ConvexPolygon>,
    polar: Option<&ConvexPolygon>,
    eigenvalues: &[(f64, f64)],
) -> String {
    let mut points: Vec<Point> = Vec::new();
    if let Some(p) = boundary {
        points.extend_from_slice(p.vertices());
    }
    if let Some(p) = polar {
        points.extend_from_slice(p.vertices());
        points.push(Point::new(0.0, 0.0));
    }
    points.extend(eigenvalues.iter().map(|&(x, y)| Point::new(x, y)));
    if points.is_empty() {
        points.push(Point::new(0.0, 0.0));
    }

    let (min_x, max_x) = span(points.iter().map(|p| p.x));
    let (min_y, max_y) = span(points.iter().map(|p| p.y));
    let width = (max_x - min_x).max(1e-9);
    let height = (max_y - min_y).max(1e-9);
    let scale = (SIDE - 2.0 * MARGIN) / width.max(height);
    let offset_x = (SIDE - scale * width) / 2.0;
    let offset_y = (SIDE - scale * height) / 2.0;
    let map = |p: Point| -> (f64, f64) {
        (
            offset_x + scale * (p.x - min_x),
            SIDE - offset_y - scale * (p.y - min_y),
        )
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIDE}\" height=\"{SIDE}\" \
         viewBox=\"0 0 {SIDE} {SIDE}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Coordinate axes, when they cross the viewport.
    if min_x <= 0.0 && 0.0 <= max_x {
        let (x, _) = map(Point::new(0.0, min_y));
        svg.push_str(&format!(
            "<line x1=\"{x:.3}\" y1=\"0\" x2=\"{x:.3}\" y2=\"{SIDE}\" stroke=\"#dddddd\"/>\n"
        ));
    }
    if min_y <= 0.0 && 0.0 <= max_y {
        let (_, y) = map(Point::new(min_x, 0.0));
        svg.push_str(&format!(
            "<line x1=\"0\" y1=\"{y:.3}\" x2=\"{SIDE}\" y2=\"{y:.3}\" stroke=\"#dddddd\"/>\n"
        ));
    }

    if let Some(p) = polar {
        svg.push_str(&polygon_path(p, map, "#d9730d", "6 4"));
    }
    if let Some(p) = boundary {
        svg.push_str(&polygon_path(p, map, "#2c6fbb", ""));
    }
    for &(x, y) in eigenvalues {
        let (px, py) = map(Point::new(x, y));
        svg.push_str(&format!(
            "<circle cx=\"{px:.3}\" cy=\"{py:.3}\" r=\"4\" fill=\"#333333\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Closed stroke path of a polygon; single vertices render as dots.
fn polygon_path(
    polygon: &ConvexPolygon,
    map: impl Fn(Point) -> (f64, f64),
    color: &str,
    dash: &str,
) -> String {
    let vertices = polygon.vertices();
    if vertices.len() == 1 {
        let (x, y) = map(vertices[0]);
        return format!("<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\" fill=\"{color}\"/>\n");
    }
    let mut d = String::new();
    for (i, &v) in vertices.iter().enumerate() {
        let (x, y) = map(v);
        d.push_str(&format!("{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" }));
    }
    d.push('Z');
    let dash_attr = if dash.is_empty() {
        String::new()
    } else {
        format!(" stroke-dasharray=\"{dash}\"")
    };
    format!(
        "<path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"{dash_attr}/>\n"
    )
}

/// Minimum and maximum of a non-empty value stream.
fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}
