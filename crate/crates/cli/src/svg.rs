//! Static SVG 1.1 plots of orbits and their liftings.

use std::fmt::Write;

use rtbp::curvegeom::Point;
use rtbp::dynamics::{self, MassParameter, Triangular};

const PANEL: f64 = 480.0;
const PAD: f64 = 36.0;
const SHADE_CELLS: usize = 120;

pub struct Marker {
    pub at: Point,
    pub label: String,
    pub color: &'static str,
}

pub struct Panel {
    pub title: String,
    pub curves: Vec<(Vec<Point>, &'static str)>,
    pub markers: Vec<Marker>,
    /// Shade where `2 omega - C < 0` (only meaningful for physical-plane panels).
    pub forbidden: Option<(MassParameter, f64)>,
}

impl Panel {
    pub fn new(title: impl Into<String>) -> Self {
        Self { title: title.into(), curves: Vec::new(), markers: Vec::new(), forbidden: None }
    }

    /// Primaries and triangular points as markers, with Hill-region shading at `c`.
    pub fn with_system(mut self, mu: MassParameter, c: Option<f64>) -> Self {
        let [p1, p2] = mu.primaries();
        self.markers.push(Marker { at: p1, label: "m1".into(), color: "#d08000" });
        self.markers.push(Marker { at: p2, label: "m2".into(), color: "#3060c0" });
        for (w, name) in [(Triangular::L4, "L4"), (Triangular::L5, "L5")] {
            let p = dynamics::lagrange_triangular(mu, w).point();
            self.markers.push(Marker { at: p, label: name.into(), color: "#808080" });
        }
        self.forbidden = c.map(|c| (mu, c));
        self
    }

    fn bounds(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in self.curves.iter().flat_map(|(c, _)| c.iter()) {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        if !lo.x.is_finite() {
            for m in &self.markers {
                lo = lo.inf(&m.at);
                hi = hi.sup(&m.at);
            }
        }
        // Square window with a margin so the aspect ratio is preserved.
        let center = (lo + hi) * 0.5;
        let half = 0.55 * (hi - lo).amax().max(1e-9);
        (center - Point::new(half, half), center + Point::new(half, half))
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.2}")
}

fn render_panel(out: &mut String, panel: &Panel, offset: f64) {
    let (lo, hi) = panel.bounds();
    let scale = (PANEL - 2.0 * PAD) / (hi.x - lo.x);
    let map = |p: &Point| (offset + PAD + (p.x - lo.x) * scale, PAD + (hi.y - p.y) * scale);
    let inside = |p: &Point| p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;

    let _ = writeln!(out, "  <g>");
    let _ = writeln!(
        out,
        "    <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\" stroke=\"#000000\" stroke-width=\"0.5\"/>",
        fmt(offset + PAD),
        fmt(PAD),
        fmt(PANEL - 2.0 * PAD),
        fmt(PANEL - 2.0 * PAD)
    );
    if let Some((mu, c)) = panel.forbidden {
        let cell = (hi.x - lo.x) / SHADE_CELLS as f64;
        let px = cell * scale;
        for j in 0..SHADE_CELLS {
            let y = hi.y - (j as f64 + 0.5) * cell;
            let mut run: Option<usize> = None;
            for i in 0..=SHADE_CELLS {
                let forbidden = i < SHADE_CELLS && {
                    let p = Point::new(lo.x + (i as f64 + 0.5) * cell, y);
                    !dynamics::hill_test(&p, mu, c)
                };
                match (forbidden, run) {
                    (true, None) => run = Some(i),
                    (false, Some(start)) => {
                        let _ = writeln!(
                            out,
                            "    <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#d8d8d8\"/>",
                            fmt(offset + PAD + start as f64 * px),
                            fmt(PAD + j as f64 * px),
                            fmt((i - start) as f64 * px),
                            fmt(px)
                        );
                        run = None;
                    }
                    _ => {}
                }
            }
        }
    }
    for (curve, color) in &panel.curves {
        let mut pts = String::new();
        for p in curve.iter().chain(curve.first()) {
            let (x, y) = map(p);
            let _ = write!(pts, "{},{} ", fmt(x), fmt(y));
        }
        let _ = writeln!(
            out,
            "    <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\"/>",
            pts.trim_end()
        );
    }
    for m in panel.markers.iter().filter(|m| inside(&m.at)) {
        let (x, y) = map(&m.at);
        let _ = writeln!(out, "    <circle cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"{}\"/>", fmt(x), fmt(y), m.color);
        let _ = writeln!(
            out,
            "    <text x=\"{}\" y=\"{}\" font-size=\"11\" font-family=\"sans-serif\">{}</text>",
            fmt(x + 5.0),
            fmt(y - 5.0),
            escape(&m.label)
        );
    }
    let _ = writeln!(
        out,
        "    <text x=\"{}\" y=\"{}\" font-size=\"13\" font-family=\"sans-serif\">{}</text>",
        fmt(offset + PAD),
        fmt(PAD - 10.0),
        escape(&panel.title)
    );
    let _ = writeln!(out, "  </g>");
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Panels laid out left to right.
pub fn render(panels: &[Panel], description: &str) -> String {
    let width = PANEL * panels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        width, PANEL, width, PANEL
    );
    let _ = writeln!(out, "  <title>{}</title>", escape(description));
    for (i, p) in panels.iter().enumerate() {
        render_panel(&mut out, p, i as f64 * PANEL);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn side_by_side_document() {
        let mu = MassParameter::new(0.000953875).unwrap();
        let circle: Vec<Point> = (0..64)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / 64.0;
                Point::new(0.5 + 0.2 * t.cos(), 0.8 + 0.2 * t.sin())
            })
            .collect();
        let mut a = Panel::new("orbit <a>").with_system(mu, Some(2.9));
        a.curves.push((circle.clone(), "#000000"));
        let mut b = Panel::new("lifted");
        b.curves.push((circle, "#c00000"));
        let s = render(&[a, b], "two panels");
        assert!(s.contains("version=\"1.1\""));
        assert!(s.contains("width=\"960\""));
        assert_eq!(s.matches("<polyline").count(), 2);
        assert!(s.contains("orbit &lt;a&gt;"));
        assert!(s.contains(">L4<"));
    }
}
