//! SVG figure of `Ω(θ₀)` with the viscosity solution (left panel) and the
//! competitor (right panel). Output is a pure function of `θ₀`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::fields::{competitor_field, viscosity_field, PiecewiseField};
use crate::geometry::{build_domain, DomainSpec};
use crate::vec2::Vec2;

const SCALE: f64 = 180.0;
const MARGIN: f64 = 0.15;
const ARROW_SPACING: f64 = 0.16;
const ARROW_LENGTH: f64 = 0.1;
/// Arrows closer than this to a jump curve are dropped.
const ARROW_CLEARANCE: f64 = 0.03;

/// Arrow anchors and field values on a grid symmetric about the axis `(OB)`.
pub fn arrow_samples(field: &PiecewiseField) -> Vec<(Vec2, Vec2)> {
    let b = field.domain().bounds();
    let nx = ((b.x1 - b.x0) / ARROW_SPACING).floor() as i64;
    let ny = (b.y1 / ARROW_SPACING).floor() as i64;
    let mut out = Vec::new();
    for j in 0..ny {
        let y = (j as f64 + 0.5) * ARROW_SPACING;
        for i in 0..=nx {
            let x = b.x0 + i as f64 * ARROW_SPACING + 0.5 * ARROW_SPACING;
            for p in [Vec2::new(x, y), Vec2::new(x, -y)] {
                let clear = field.jump_curves().iter().all(|c| c.distance(p) > ARROW_CLEARANCE)
                    && field.singular_points().iter().all(|s| s.dist(p) > ARROW_CLEARANCE);
                if !clear {
                    continue;
                }
                if let Ok(v) = field.eval(p) {
                    out.push((p, v));
                }
            }
        }
    }
    out
}

struct Frame {
    x_min: f64,
    y_max: f64,
    offset: f64,
}

impl Frame {
    fn map(&self, p: Vec2) -> (f64, f64) {
        (self.offset + (p.x - self.x_min) * SCALE, (self.y_max - p.y) * SCALE)
    }

    fn polyline(&self, svg: &mut String, pts: &[Vec2], class: &str) {
        let coords: Vec<String> = pts
            .iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(svg, r#"<polyline class="{class}" points="{}"/>"#, coords.join(" "));
    }

    fn landmark(&self, svg: &mut String, p: Vec2, label: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(svg, r#"<circle class="landmark" cx="{x:.2}" cy="{y:.2}" r="3"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}">{label}</text>"#,
            x + 5.0,
            y - 5.0
        );
    }
}

fn arc(from: f64, to: f64, count: usize) -> Vec<Vec2> {
    (0..=count)
        .map(|k| Vec2::from_angle(from + (to - from) * k as f64 / count as f64))
        .collect()
}

fn draw_panel(svg: &mut String, frame: &Frame, d: &DomainSpec, field: &PiecewiseField, title: &str) {
    let theta0 = d.theta0;
    let pi = std::f64::consts::PI;
    let (tx, ty) = frame.map(Vec2::new(-1.0, 1.1));
    let _ = writeln!(svg, r#"<text class="title" x="{tx:.2}" y="{ty:.2}">{title}</text>"#);
    frame.polyline(svg, &arc(0.0, 2.0 * pi, 360), "circle");
    let mut boundary = arc(theta0, 2.0 * pi - theta0, 360);
    boundary.extend([d.b, d.a]);
    frame.polyline(svg, &boundary, "boundary");
    frame.polyline(svg, &[d.a, d.b, d.a_prime], "gamma-boundary");
    for c in field.jump_curves() {
        let (a, b) = c.parameter_range();
        let pts: Vec<Vec2> = (0..=200).map(|k| c.point(a + (b - a) * k as f64 / 200.0)).collect();
        frame.polyline(svg, &pts, "jump");
    }
    for (p, v) in arrow_samples(field) {
        let (x0, y0) = frame.map(p - 0.5 * ARROW_LENGTH * v);
        let (x1, y1) = frame.map(p + 0.5 * ARROW_LENGTH * v);
        let _ = writeln!(
            svg,
            r#"<line class="arrow" x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" marker-end="url(#head)"/>"#
        );
    }
    frame.landmark(svg, Vec2::ZERO, "O");
    frame.landmark(svg, d.a, "A");
    frame.landmark(svg, d.a_prime, "A′");
    frame.landmark(svg, d.b, "B");
    frame.landmark(svg, d.i_point, "I");
}

/// The two-panel figure as an SVG document.
pub fn render_svg(theta0: f64) -> Result<String> {
    let d = build_domain(theta0)?;
    let m0 = viscosity_field(theta0)?;
    let m = competitor_field(theta0)?;
    let (x_min, x_max) = (-1.0 - MARGIN, d.len_ob + MARGIN);
    let y_max = 1.0 + 2.0 * MARGIN;
    let panel = (x_max - x_min) * SCALE;
    let (width, height) = (2.0 * panel, 2.0 * y_max * SCALE);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    svg.push_str(concat!(
        "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"5\" markerHeight=\"5\" orient=\"auto\">",
        "<path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>\n",
        "<style>polyline{fill:none;stroke:#000;stroke-width:1}",
        " .circle{stroke:#888;stroke-dasharray:4 3}",
        " .gamma-boundary{stroke:#1f5fbf;stroke-width:2}",
        " .jump{stroke:#c0392b;stroke-width:2}",
        " .arrow{stroke:#333;stroke-width:1}",
        " .landmark{fill:#000}",
        " text{font-family:sans-serif;font-size:13px}</style>\n",
    ));
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (k, (field, title)) in [(&m0, "viscosity solution m0"), (&m, "competitor m")].into_iter().enumerate() {
        let frame = Frame {
            x_min,
            y_max,
            offset: k as f64 * panel,
        };
        draw_panel(&mut svg, &frame, &d, field, title);
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn write_svg(theta0: f64, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_svg(theta0)?)?;
    Ok(())
}
