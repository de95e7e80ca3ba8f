//! Static SVG renderings of a sphere sweep.

use std::f64::consts::TAU;
use std::fmt::Write;

use crate::sphere::SphereSample;

const POLAR_SIZE: f64 = 600.0;
const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 300.0;
const MARGIN: f64 = 40.0;

fn header(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Polar curve `r(theta)` with a dashed ray through each flagged sample and
/// its antipode.
pub fn polar_svg(samples: &[SphereSample]) -> String {
    let c = POLAR_SIZE / 2.0;
    let rmax = samples.iter().map(|s| s.r).fold(0.0, f64::max);
    let scale = if rmax > 0.0 { (c - MARGIN) / rmax } else { 1.0 };
    let mut svg = header(POLAR_SIZE, POLAR_SIZE);
    let _ = writeln!(
        svg,
        "<g stroke=\"#bbb\" stroke-width=\"1\"><line x1=\"{m}\" y1=\"{c}\" x2=\"{e}\" y2=\"{c}\"/><line x1=\"{c}\" y1=\"{m}\" x2=\"{c}\" y2=\"{e}\"/></g>",
        m = MARGIN / 2.0,
        e = POLAR_SIZE - MARGIN / 2.0
    );
    let reach = c - MARGIN / 2.0;
    for s in samples.iter().filter(|s| s.near_singular) {
        let (x, y) = (c + reach * s.theta.cos(), c - reach * s.theta.sin());
        let (x2, y2) = (2.0 * c - x, 2.0 * c - y);
        let _ = writeln!(
            svg,
            "<line x1=\"{x2:.3}\" y1=\"{y2:.3}\" x2=\"{x:.3}\" y2=\"{y:.3}\" stroke=\"#555\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>"
        );
    }
    if !samples.is_empty() {
        let mut d = String::new();
        for (i, s) in samples.iter().enumerate() {
            let (x, y) = (c + scale * s.r * s.theta.cos(), c - scale * s.r * s.theta.sin());
            let _ = write!(d, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" });
        }
        d.push('Z');
        let _ = writeln!(svg, "<path d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>");
    }
    svg.push_str("</svg>\n");
    svg
}

fn panel(svg: &mut String, ox: f64, oy: f64, label: &str, pts: &[(f64, f64)], marks: &[f64]) {
    let (x0, y0) = (ox + MARGIN, oy + MARGIN / 2.0);
    let (w, h) = (PANEL_W - 1.5 * MARGIN, PANEL_H - 1.5 * MARGIN);
    let _ = writeln!(svg, "<rect x=\"{x0}\" y=\"{y0}\" width=\"{w}\" height=\"{h}\" fill=\"none\" stroke=\"#888\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\">{label}</text>",
        x0 + 6.0,
        y0 + 16.0
    );
    for &t in marks {
        let x = x0 + w * t / TAU;
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.3}\" y1=\"{y0}\" x2=\"{x:.3}\" y2=\"{}\" stroke=\"#999\" stroke-dasharray=\"4,3\"/>",
            y0 + h
        );
    }
    if pts.is_empty() {
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#888\">no data</text>",
            x0 + w / 2.0 - 20.0,
            y0 + h / 2.0
        );
        return;
    }
    let lo = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut d = String::new();
    for (i, (t, v)) in pts.iter().enumerate() {
        let x = x0 + w * t / TAU;
        let y = y0 + h - h * (v - lo) / span;
        let _ = write!(d, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" });
    }
    let _ = writeln!(svg, "<path d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#555\" text-anchor=\"end\">{hi:.3e}</text>\n\
         <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#555\" text-anchor=\"end\">{lo:.3e}</text>",
        x0 - 4.0,
        y0 + 10.0,
        x0 - 4.0,
        y0 + h
    );
}

/// 2x2 panel of `r, d1, d2, d3` against `theta`, with dashed verticals at
/// flagged samples.
pub fn derivatives_svg(samples: &[SphereSample]) -> String {
    let mut svg = header(2.0 * PANEL_W, 2.0 * PANEL_H);
    let marks: Vec<f64> = samples.iter().filter(|s| s.near_singular).map(|s| s.theta).collect();
    let series: [(&str, fn(&SphereSample) -> Option<f64>); 4] = [
        ("r", |s| Some(s.r)),
        ("r'", |s| s.d1),
        ("r''", |s| s.d2),
        ("r'''", |s| s.d3),
    ];
    for (k, (label, get)) in series.iter().enumerate() {
        let pts: Vec<(f64, f64)> = samples.iter().filter_map(|s| get(s).map(|v| (s.theta, v))).collect();
        let (ox, oy) = ((k % 2) as f64 * PANEL_W, (k / 2) as f64 * PANEL_H);
        panel(&mut svg, ox, oy, label, &pts, &marks);
    }
    svg.push_str("</svg>\n");
    svg
}
