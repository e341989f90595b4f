//! Deterministic SVG drawing of a graph.

use std::collections::BTreeSet;
use std::fmt::Write;

use theta6::routing::Path;
use theta6::Theta6Graph;

/// One color per cone, indexed by cone number.
pub const CONE_COLORS: [&str; 6] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#a6761d"];

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Vertices as circles, edges as arrows colored by cone. Edges on a highlighted path get a
/// thicker stroke. The y axis points up.
pub fn render_svg(g: &Theta6Graph, highlight: &[Path]) -> String {
    let pts: Vec<(f64, f64)> = (0..g.len()).map(|u| g.point(u).to_f64()).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if pts.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let (w, h) = ((x1 - x0).max(span * 1e-3), (y1 - y0).max(span * 1e-3));
    let (mx, my) = (0.05 * w.max(span * 0.05), 0.05 * h.max(span * 0.05));
    let (vx, vy, vw, vh) = (x0 - mx, -(y1 + my), w + 2.0 * mx, h + 2.0 * my);
    let radius = span * 0.006;
    let stroke = span * 0.002;

    let on_path: BTreeSet<(usize, usize)> =
        highlight.iter().flat_map(|p| p.vertices.windows(2).map(|e| (e[0], e[1]))).collect();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        num(vx),
        num(vy),
        num(vw),
        num(vh),
        num((800.0 * vw / vw.max(vh)).round()),
        num((800.0 * vh / vw.max(vh)).round())
    );
    s.push_str("<defs>\n");
    for (i, c) in CONE_COLORS.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<marker id="head{i}" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="{c}"/></marker>"#
        );
    }
    s.push_str("</defs>\n");
    for (u, e) in g.edges() {
        let (a, b) = (pts[u], pts[e.target]);
        let k = e.cone.value();
        let (class, width) =
            if on_path.contains(&(u, e.target)) { (" path", stroke * 4.0) } else { ("", stroke) };
        // Stop short of the target circle so the head stays visible.
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt().max(1e-300);
        let cut = (radius / len).min(0.5);
        let end = (b.0 - (b.0 - a.0) * cut, b.1 - (b.1 - a.1) * cut);
        let _ = writeln!(
            s,
            r#"<line class="edge cone{k}{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="{}" marker-end="url(#head{k})"/>"#,
            num(a.0),
            num(-a.1),
            num(end.0),
            num(-end.1),
            CONE_COLORS[k],
            num(width)
        );
    }
    for (u, &(x, y)) in pts.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<circle class="vertex" id="v{u}" cx="{}" cy="{}" r="{}" fill="black"/>"#,
            num(x),
            num(-y),
            num(radius)
        );
    }
    s.push_str("</svg>\n");
    s
}
