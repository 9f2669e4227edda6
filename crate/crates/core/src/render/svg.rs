//! Deterministic SVG output.

use std::fmt::Write;

use crate::layout::LayoutScene;
use crate::vessel::{ArteryLabel, Side};

use super::{color_for_edge, ColorMode, ColorScheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SvgOptions {
    pub legend: bool,
    /// Padding around the drawing, px.
    pub margin: u32,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            legend: true,
            margin: 24,
        }
    }
}

pub fn scene_has_flow(scene: &LayoutScene) -> bool {
    scene.edge_paths.iter().any(|e| e.flow.is_some())
}

/// Fixed three-decimal formatting with `-0` folded into `0`.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Renders every edge path as one `<path>` element with id `edge-<id>` and
/// `data-edge-id="<id>"`. Flow mode on a scene without flow values falls
/// back to categorical colors. Output depends only on the inputs.
pub fn render_svg(scene: &LayoutScene, scheme: &ColorScheme, options: &SvgOptions) -> String {
    let mut scheme = scheme.clone();
    if scheme.mode == ColorMode::Flow && !scene_has_flow(scene) {
        scheme.mode = ColorMode::Categorical;
    }
    let max_flow = scene
        .edge_paths
        .iter()
        .filter_map(|e| e.flow)
        .fold(0.0, f64::max);

    let (mut x0, mut y0, mut x1, mut y1) = (
        0.0f64,
        f64::INFINITY,
        scene.config.canvas_width,
        f64::NEG_INFINITY,
    );
    for e in &scene.edge_paths {
        for c in &e.path {
            for p in c.points {
                x0 = x0.min(p.x);
                x1 = x1.max(p.x);
                y0 = y0.min(p.y);
                y1 = y1.max(p.y);
            }
        }
    }
    if !y0.is_finite() {
        (y0, y1) = (0.0, scene.config.cow_baseline_y);
    }
    let m = options.margin as f64;
    let legend_h = if options.legend && scheme.mode == ColorMode::Categorical {
        60.0
    } else {
        0.0
    };
    let (vx, vy) = ((x0 - m).floor(), (y0 - m).floor());
    let (w, h) = ((x1 + m).ceil() - vx, (y1 + m + legend_h).ceil() - vy);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        num(w),
        num(h),
        num(vx),
        num(vy),
        num(w),
        num(h)
    );
    let _ = writeln!(out, "<title>{}</title>", escape(&scene.scan_id));
    let _ = writeln!(out, r#"<g id="edges" fill="none" stroke-linecap="round">"#);
    for e in &scene.edge_paths {
        let flow = e.flow.map(|f| (f, max_flow));
        let color = color_for_edge(e.label, &scheme, flow);
        let mut d = String::new();
        for (i, c) in e.path.iter().enumerate() {
            let [a, b, cc, dd] = c.points;
            if i == 0 {
                let _ = write!(d, "M{} {}", num(a.x), num(a.y));
            }
            let _ = write!(
                d,
                " C{} {} {} {} {} {}",
                num(b.x),
                num(b.y),
                num(cc.x),
                num(cc.y),
                num(dd.x),
                num(dd.y)
            );
        }
        let dash = if e.dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            out,
            r#"<path id="edge-{id}" data-edge-id="{id}" data-label="{label}" d="{d}" stroke="{color}" stroke-width="{sw}"{dash}/>"#,
            id = e.edge_id,
            label = e.label,
            sw = num(e.stroke_width),
        );
    }
    let _ = writeln!(out, "</g>");
    if legend_h > 0.0 {
        write_legend(&mut out, &scheme, vx + m, y1 + m);
    }
    let _ = writeln!(out, "</svg>");
    out
}

fn write_legend(out: &mut String, scheme: &ColorScheme, x: f64, y: f64) {
    let mut entries: Vec<ArteryLabel> = ArteryLabel::NAMED.to_vec();
    entries.push(ArteryLabel::Unlabeled(Side::Center, 0));
    let _ = writeln!(
        out,
        r#"<g id="legend" font-family="sans-serif" font-size="11">"#
    );
    for (i, label) in entries.iter().enumerate() {
        let (col, row) = ((i % 7) as f64, (i / 7) as f64);
        let (lx, ly) = (x + col * 110.0, y + row * 22.0);
        let name = match label {
            ArteryLabel::Unlabeled(..) => "Unlabeled".to_string(),
            l => l.to_string(),
        };
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="14" height="10" fill="{}"/><text x="{}" y="{}">{}</text>"#,
            num(lx),
            num(ly),
            scheme.categorical(*label),
            num(lx + 20.0),
            num(ly + 9.0),
            name
        );
    }
    let _ = writeln!(out, "</g>");
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
