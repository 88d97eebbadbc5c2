//! Minimal standalone SVG line charts: estimate curves solid, bound curves
//! dashed, gap points omitted. No rasterization dependency; the output is
//! plain markup that diffs cleanly in review.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 520.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 200.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
    "#bcbd22", "#e377c2",
];

/// One curve; `None` values break the polyline into segments.
#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, Option<f64>)>,
    pub dashed: bool,
}

/// A figure: axis labels, optional log-scale x, and the curves to draw.
#[derive(Debug, Clone)]
pub struct FigureSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
}

/// Writes the figure as a standalone SVG document. An empty spec still
/// produces a valid plot area with axes.
pub fn emit_svg(path: &Path, spec: &FigureSpec) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);

    let xform = |x: f64| if spec.log_x { x.log10() } else { x };
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for s in &spec.series {
        for &(x, y) in &s.points {
            if let Some(y) = y {
                if y.is_finite() {
                    xs.push(xform(x));
                    ys.push(y);
                }
            }
        }
    }
    let (x_min, x_max) = padded_range(&xs, 0.0);
    let (y_min, y_max) = padded_range(&ys, 0.06);

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let px = |x: f64| MARGIN_L + (xform(x) - x_min) / (x_max - x_min) * plot_w;
    let py = |y: f64| MARGIN_T + (y_max - y) / (y_max - y_min) * plot_h;

    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )?;
    writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )?;
    writeln!(
        out,
        r#"<text x="{:.1}" y="22" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        MARGIN_L + plot_w / 2.0,
        escape(&spec.title)
    )?;

    // Frame.
    writeln!(
        out,
        r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="black" stroke-width="1"/>"#
    )?;

    // Ticks and grid.
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let gx = MARGIN_L + f * plot_w;
        let gy = MARGIN_T + f * plot_h;
        let xv = x_min + f * (x_max - x_min);
        let yv = y_max - f * (y_max - y_min);
        let x_text = if spec.log_x {
            format!("1e{xv:.1}")
        } else {
            format!("{xv:.3}")
        };
        writeln!(
            out,
            r##"<line x1="{gx:.1}" y1="{MARGIN_T}" x2="{gx:.1}" y2="{:.1}" stroke="#dddddd" stroke-width="0.5"/>"##,
            MARGIN_T + plot_h
        )?;
        writeln!(
            out,
            r##"<line x1="{MARGIN_L}" y1="{gy:.1}" x2="{:.1}" y2="{gy:.1}" stroke="#dddddd" stroke-width="0.5"/>"##,
            MARGIN_L + plot_w
        )?;
        writeln!(
            out,
            r#"<text x="{gx:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{x_text}</text>"#,
            MARGIN_T + plot_h + 16.0
        )?;
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{yv:.4}</text>"#,
            MARGIN_L - 6.0,
            gy + 4.0
        )?;
    }
    writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(&spec.x_label)
    )?;
    writeln!(
        out,
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        escape(&spec.y_label)
    )?;

    // Curves.
    for (si, s) in spec.series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let dash = if s.dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        for segment in segments(&s.points) {
            if segment.len() == 1 {
                let (x, y) = segment[0];
                writeln!(
                    out,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                    px(x),
                    py(y)
                )?;
                continue;
            }
            let pts: Vec<String> = segment
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.6"{dash}/>"#,
                pts.join(" ")
            )?;
        }
        // Legend.
        let ly = MARGIN_T + 14.0 + 18.0 * si as f64;
        let lx = WIDTH - MARGIN_R + 14.0;
        writeln!(
            out,
            r#"<line x1="{lx:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="1.6"{dash}/>"#,
            ly - 4.0,
            lx + 26.0,
            ly - 4.0
        )?;
        writeln!(
            out,
            r#"<text x="{:.1}" y="{ly:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            lx + 32.0,
            escape(&s.name)
        )?;
    }

    writeln!(out, "</svg>")?;
    out.flush()
}

fn segments(points: &[(f64, Option<f64>)]) -> Vec<Vec<(f64, f64)>> {
    let mut segs = Vec::new();
    let mut cur = Vec::new();
    for &(x, y) in points {
        match y {
            Some(y) if y.is_finite() => cur.push((x, y)),
            _ => {
                if !cur.is_empty() {
                    segs.push(std::mem::take(&mut cur));
                }
            }
        }
    }
    if !cur.is_empty() {
        segs.push(cur);
    }
    segs
}

fn padded_range(values: &[f64], pad: f64) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 1.0);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let span = hi - lo;
    (lo - pad * span, hi + pad * span)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
