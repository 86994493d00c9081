//! Deterministic SVG output for polygon pairs and tropical curves.
//!
//! Drawings use 32 px per lattice unit with the y-axis pointing up. The
//! viewBox is the bounding box of everything drawn plus one unit of margin.
//! Numbers are printed with two decimals so equal inputs give equal bytes.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::geom2d::{surface_measure, GeomError, LatticePolygon, LatticeVector};
use crate::tropical::TropicalCurve;

pub const PX_PER_UNIT: f64 = 32.0;
const MARGIN: f64 = 1.0;
/// Gap in units between `P` and `Q` in a pair drawing.
const PAIR_GAP: f64 = 2.0;
/// Normal arrow length per unit of edge lattice length.
const ARROW_SCALE: f64 = 0.5;

const P_COLOR: &str = "#1f77b4";
const Q_COLOR: &str = "#d62728";

#[derive(Clone, Copy, Debug, PartialEq)]
struct Bounds {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl Bounds {
    fn empty() -> Self {
        Self { min_x: f64::INFINITY, min_y: f64::INFINITY, max_x: f64::NEG_INFINITY, max_y: f64::NEG_INFINITY }
    }

    fn add(&mut self, (x, y): (f64, f64)) {
        self.min_x = self.min_x.min(x);
        self.min_y = self.min_y.min(y);
        self.max_x = self.max_x.max(x);
        self.max_y = self.max_y.max(y);
    }

    fn is_empty(&self) -> bool {
        self.min_x > self.max_x
    }
}

enum Shape {
    Polygon { points: Vec<(f64, f64)>, color: &'static str },
    Line { from: (f64, f64), to: (f64, f64), color: &'static str, width: f64 },
    Arrow { from: (f64, f64), to: (f64, f64), color: &'static str },
    Dot { at: (f64, f64), color: &'static str },
    Label { at: (f64, f64), text: String, color: &'static str },
}

/// Collects shapes in world coordinates and writes them out in order. Labels
/// do not count towards the bounds.
struct Canvas {
    shapes: Vec<Shape>,
    bounds: Bounds,
}

impl Canvas {
    fn new() -> Self {
        Self { shapes: Vec::new(), bounds: Bounds::empty() }
    }

    fn push(&mut self, shape: Shape) {
        match &shape {
            Shape::Polygon { points, .. } => points.iter().for_each(|&p| self.bounds.add(p)),
            Shape::Line { from, to, .. } | Shape::Arrow { from, to, .. } => {
                self.bounds.add(*from);
                self.bounds.add(*to);
            }
            Shape::Dot { at, .. } => self.bounds.add(*at),
            Shape::Label { .. } => {}
        }
        self.shapes.push(shape);
    }

    fn finish(self, fixed: Option<Bounds>) -> String {
        let mut b = fixed.unwrap_or(self.bounds);
        if b.is_empty() {
            b = Bounds { min_x: 0.0, min_y: 0.0, max_x: 0.0, max_y: 0.0 };
        }
        let (x0, y1) = (b.min_x - MARGIN, b.max_y + MARGIN);
        let w = (b.max_x - b.min_x + 2.0 * MARGIN) * PX_PER_UNIT;
        let h = (b.max_y - b.min_y + 2.0 * MARGIN) * PX_PER_UNIT;
        let px = |(x, y): (f64, f64)| ((x - x0) * PX_PER_UNIT, (y1 - y) * PX_PER_UNIT);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2}" height="{h:.2}" viewBox="0.00 0.00 {w:.2} {h:.2}">"#
        );
        s.push_str(concat!(
            r#"<defs><marker id="head" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto-start-reverse">"#,
            r#"<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>"#,
            "\n"
        ));
        for shape in &self.shapes {
            match shape {
                Shape::Polygon { points, color } => {
                    let pts: Vec<String> = points
                        .iter()
                        .map(|&p| {
                            let (x, y) = px(p);
                            format!("{x:.2},{y:.2}")
                        })
                        .collect();
                    let _ = writeln!(
                        s,
                        r#"<polygon points="{}" fill="{color}" fill-opacity="0.15" stroke="{color}" stroke-width="2"/>"#,
                        pts.join(" ")
                    );
                }
                Shape::Line { from, to, color, width } => {
                    let ((ax, ay), (bx, by)) = (px(*from), px(*to));
                    let _ = writeln!(
                        s,
                        r#"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="{color}" stroke-width="{width:.2}"/>"#
                    );
                }
                Shape::Arrow { from, to, color } => {
                    let ((ax, ay), (bx, by)) = (px(*from), px(*to));
                    let _ = writeln!(
                        s,
                        r#"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="{color}" stroke-width="1.50" marker-end="url(#head)"/>"#
                    );
                }
                Shape::Dot { at, color } => {
                    let (x, y) = px(*at);
                    let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4.00" fill="{color}"/>"#);
                }
                Shape::Label { at, text, color } => {
                    let (x, y) = px(*at);
                    let _ = writeln!(
                        s,
                        r#"<text x="{x:.2}" y="{y:.2}" font-family="monospace" font-size="10" fill="{color}">{text}</text>"#
                    );
                }
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

fn f(v: LatticeVector) -> (f64, f64) {
    (v.x as f64, v.y as f64)
}

/// Draws `poly` shifted by `offset`, labelled with its own coordinates.
fn draw_polygon(canvas: &mut Canvas, poly: &LatticePolygon, offset: f64, color: &'static str) {
    let at = |v: LatticeVector| (v.x as f64 + offset, v.y as f64);
    let verts = poly.vertices();
    match poly.dimension() {
        0 => canvas.push(Shape::Dot { at: at(verts[0]), color }),
        1 => canvas.push(Shape::Line { from: at(verts[0]), to: at(verts[1]), color, width: 2.0 }),
        _ => canvas.push(Shape::Polygon { points: verts.iter().map(|&v| at(v)).collect(), color }),
    }
    for &v in verts {
        let (x, y) = at(v);
        canvas.push(Shape::Label { at: (x + 0.1, y + 0.1), text: format!("({},{})", v.x, v.y), color });
    }
}

/// Outer normals of `poly`, drawn from edge midpoints with length
/// proportional to the edge's lattice length.
fn draw_normals(canvas: &mut Canvas, poly: &LatticePolygon, offset: f64, color: &'static str) -> Result<(), GeomError> {
    if poly.dimension() < 2 {
        return Ok(());
    }
    let measure = surface_measure(poly)?;
    for (a, b) in poly.edges() {
        let (dir, len) = b.checked_sub(a)?.primitive_part().expect("distinct vertices");
        let normal = LatticeVector::new(dir.y, -dir.x);
        debug_assert!(measure.entries.iter().any(|e| e.normal == normal && e.length == len));
        let (nx, ny) = f(normal);
        let norm = nx.hypot(ny);
        let mid = ((a.x as f64 + b.x as f64) / 2.0 + offset, (a.y as f64 + b.y as f64) / 2.0);
        let scale = ARROW_SCALE * len as f64 / norm;
        canvas.push(Shape::Arrow { from: mid, to: (mid.0 + nx * scale, mid.1 + ny * scale), color });
    }
    Ok(())
}

/// `P` and `Q` side by side, with vertex labels and the outer normals of `Q`.
pub fn render_pair(p: &LatticePolygon, q: &LatticePolygon) -> Result<String, GeomError> {
    let p_max = p.vertices().iter().map(|v| v.x).max().unwrap_or(0);
    let q_min = q.vertices().iter().map(|v| v.x).min().unwrap_or(0);
    let offset = p_max as f64 - q_min as f64 + PAIR_GAP;
    let mut canvas = Canvas::new();
    draw_polygon(&mut canvas, p, 0.0, P_COLOR);
    draw_polygon(&mut canvas, q, offset, Q_COLOR);
    draw_normals(&mut canvas, q, offset, Q_COLOR)?;
    Ok(canvas.finish(None))
}

/// Region rays and lines are cut to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClipBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl ClipBox {
    /// Bounding box of the curves' vertices and line anchors, grown by `pad`.
    pub fn around(curves: &[&TropicalCurve], pad: f64) -> Self {
        let mut b = Bounds::empty();
        for c in curves {
            c.vertices.iter().for_each(|v| b.add(v.to_f64()));
            c.lines.iter().for_each(|l| b.add(l.point.to_f64()));
        }
        if b.is_empty() {
            b = Bounds { min_x: 0.0, min_y: 0.0, max_x: 0.0, max_y: 0.0 };
        }
        Self { min_x: b.min_x - pad, min_y: b.min_y - pad, max_x: b.max_x + pad, max_y: b.max_y + pad }
    }

    /// Liang–Barsky: the part of `origin + t·dir`, `t ∈ [lo, hi]`, inside the box.
    fn clip(&self, origin: (f64, f64), dir: (f64, f64), lo: f64, hi: f64) -> Option<((f64, f64), (f64, f64))> {
        let (mut t0, mut t1) = (lo, hi);
        for (p, q) in [
            (-dir.0, origin.0 - self.min_x),
            (dir.0, self.max_x - origin.0),
            (-dir.1, origin.1 - self.min_y),
            (dir.1, self.max_y - origin.1),
        ] {
            if p == 0.0 {
                if q < 0.0 {
                    return None;
                }
                continue;
            }
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
        (t0 <= t1).then(|| {
            let at = |t: f64| (origin.0 + t * dir.0, origin.1 + t * dir.1);
            (at(t0), at(t1))
        })
    }
}

const CURVE_COLORS: [&str; 2] = [P_COLOR, Q_COLOR];

/// Tropical curves, with rays and lines cut to `clip`. Edge width grows with
/// weight and weights above one are labelled.
pub fn render_curves(curves: &[&TropicalCurve], clip: ClipBox) -> String {
    let mut canvas = Canvas::new();
    for (i, curve) in curves.iter().enumerate() {
        let color = CURVE_COLORS[i % CURVE_COLORS.len()];
        let mut segment = |from: (f64, f64), dir: (f64, f64), lo: f64, hi: f64, weight: u64| {
            if let Some((a, b)) = clip.clip(from, dir, lo, hi) {
                canvas.push(Shape::Line { from: a, to: b, color, width: 1.0 + weight as f64 });
                if weight > 1 {
                    let mid = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
                    canvas.push(Shape::Label { at: mid, text: weight.to_string(), color });
                }
            }
        };
        for e in &curve.edges {
            let a = curve.vertices[e.from].to_f64();
            let b = curve.vertices[e.to].to_f64();
            segment(a, (b.0 - a.0, b.1 - a.1), 0.0, 1.0, e.weight);
        }
        for r in &curve.rays {
            segment(curve.vertices[r.vertex].to_f64(), f(r.direction), 0.0, f64::INFINITY, r.weight);
        }
        for l in &curve.lines {
            segment(l.point.to_f64(), f(l.direction), f64::NEG_INFINITY, f64::INFINITY, l.weight);
        }
        for v in &curve.vertices {
            let at = v.to_f64();
            if clip.clip(at, (0.0, 0.0), 0.0, 0.0).is_some() {
                canvas.push(Shape::Dot { at, color });
            }
        }
    }
    let fixed = Bounds { min_x: clip.min_x, min_y: clip.min_y, max_x: clip.max_x, max_y: clip.max_y };
    canvas.finish(Some(fixed))
}
