//! Per-step SVG rendering of walk amplitudes: each arc is drawn as a line
//! offset from its edge, red for positive and blue for negative entries,
//! with opacity proportional to the magnitude within the frame.

use qwalk_core::graphs::{ArcSpace, MultiGraph};

const CANVAS: f64 = 640.0;
const MARGIN: f64 = 60.0;

/// Deterministic circular layout for plain graphs.
fn circular_layout(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|v| {
            let angle = 2.0 * std::f64::consts::PI * v as f64 / n.max(1) as f64;
            (angle.cos(), angle.sin())
        })
        .collect()
}

fn fit(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let span_x = (max_x - min_x).max(1e-9);
    let span_y = (max_y - min_y).max(1e-9);
    let scale = (CANVAS - 2.0 * MARGIN) / span_x.max(span_y);
    points
        .iter()
        .map(|&(x, y)| {
            (
                MARGIN + (x - min_x) * scale,
                MARGIN + (y - min_y) * scale,
            )
        })
        .collect()
}

pub fn render_frame(
    graph: &MultiGraph,
    arcs: &ArcSpace,
    layout: Option<&[(f64, f64)]>,
    state: &[f64],
) -> String {
    let raw = layout
        .map(|l| l.to_vec())
        .unwrap_or_else(|| circular_layout(graph.n_vertices()));
    let pos = fit(&raw);
    let max_amp = state.iter().fold(1e-12f64, |acc, x| acc.max(x.abs()));
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{c}\" viewBox=\"0 0 {c} {c}\">\n",
        c = CANVAS
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // multiplicity of parallel edges shifts each instance outward
    let mut seen_pair: std::collections::HashMap<(usize, usize), usize> =
        std::collections::HashMap::new();
    for (a, arc) in arcs.arcs.iter().enumerate() {
        let amp = state[a];
        let opacity = (amp.abs() / max_amp).clamp(0.0, 1.0);
        if opacity < 1e-4 {
            continue;
        }
        let color = if amp >= 0.0 { "#cc2222" } else { "#2244cc" };
        let (x1, y1) = pos[arc.tail];
        let (x2, y2) = pos[arc.head];
        if arc.tail == arc.head {
            // loop: a small circle beside the vertex, nudged per instance
            let nth = *seen_pair
                .entry((arc.tail, arc.edge_instance))
                .and_modify(|c| *c += 1)
                .or_insert(0);
            let r = 14.0 + 6.0 * arc.edge_instance as f64;
            let side = if a % 2 == 0 { 1.0 } else { -1.0 };
            let _ = nth;
            out.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{r:.2}\" fill=\"none\" stroke=\"{color}\" stroke-opacity=\"{opacity:.4}\" stroke-width=\"3\"/>\n",
                x1 + side * r,
                y1
            ));
            continue;
        }
        // offset the arc perpendicular to the edge so both directions and
        // parallel instances stay visible
        let dx = x2 - x1;
        let dy = y2 - y1;
        let len = (dx * dx + dy * dy).sqrt().max(1e-9);
        let (nx, ny) = (-dy / len, dx / len);
        let inst_shift = 5.0
            * *seen_pair
                .entry((arc.tail.min(arc.head), arc.tail.max(arc.head)))
                .and_modify(|c| *c += 1)
                .or_insert(0) as f64;
        let off = 4.0 + inst_shift;
        // head-side shortening leaves an arrow gap
        let t0 = 0.12;
        let t1 = 0.88;
        let (ax, ay) = (x1 + dx * t0 + nx * off, y1 + dy * t0 + ny * off);
        let (bx, by) = (x1 + dx * t1 + nx * off, y1 + dy * t1 + ny * off);
        out.push_str(&format!(
            "<line x1=\"{ax:.2}\" y1=\"{ay:.2}\" x2=\"{bx:.2}\" y2=\"{by:.2}\" stroke=\"{color}\" stroke-opacity=\"{opacity:.4}\" stroke-width=\"3\"/>\n"
        ));
        out.push_str(&format!(
            "<circle cx=\"{bx:.2}\" cy=\"{by:.2}\" r=\"4\" fill=\"{color}\" fill-opacity=\"{opacity:.4}\"/>\n"
        ));
    }
    for &(x, y) in &pos {
        out.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"5\" fill=\"black\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    out
}
