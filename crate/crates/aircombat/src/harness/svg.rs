//! Dependency-free SVG line charts. Output is deterministic: fixed palette,
//! fixed layout, fixed numeric formatting.

use crate::Result;
use std::fmt::Write as _;
use std::path::Path;

pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64)>,
}

pub struct Panel<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub series: Vec<Series<'a>>,
}

const PANEL_W: f64 = 460.0;
const PANEL_H: f64 = 340.0;
const MARGIN_L: f64 = 62.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 34.0;
const MARGIN_B: f64 = 44.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

fn fmt_tick(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".to_string()
    } else if a >= 1000.0 {
        format!("{v:.0}")
    } else if a >= 1.0 {
        format!("{v:.2}")
    } else {
        format!("{v:.4}")
    }
}

fn bounds(series: &[Series<'_>]) -> ((f64, f64), (f64, f64)) {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for s in series {
        for (x, y) in &s.points {
            if x.is_finite() && y.is_finite() {
                xmin = xmin.min(*x);
                xmax = xmax.max(*x);
                ymin = ymin.min(*y);
                ymax = ymax.max(*y);
            }
        }
    }
    if !xmin.is_finite() {
        return ((0.0, 1.0), (0.0, 1.0));
    }
    if xmin == xmax {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if ymin == ymax {
        ymin -= 0.5;
        ymax += 0.5;
    }
    let ypad = 0.05 * (ymax - ymin);
    ((xmin, xmax), (ymin - ypad, ymax + ypad))
}

fn render_panel(svg: &mut String, panel: &Panel<'_>, x0: f64, y0: f64) {
    let ((xmin, xmax), (ymin, ymax)) = bounds(&panel.series);
    let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let px = |x: f64| x0 + MARGIN_L + (x - xmin) / (xmax - xmin) * plot_w;
    let py = |y: f64| y0 + MARGIN_T + (1.0 - (y - ymin) / (ymax - ymin)) * plot_h;

    let _ = write!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" font-family=\"sans-serif\" font-weight=\"bold\">{}</text>",
        x0 + MARGIN_L,
        y0 + 18.0,
        panel.title
    );
    // Frame.
    let _ = write!(
        svg,
        "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{plot_w:.1}\" height=\"{plot_h:.1}\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>",
        x0 + MARGIN_L,
        y0 + MARGIN_T
    );
    // Ticks: 4 intervals each axis.
    for i in 0..=4u32 {
        let f = i as f64 / 4.0;
        let xv = xmin + f * (xmax - xmin);
        let yv = ymin + f * (ymax - ymin);
        let _ = write!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"middle\">{}</text>",
            px(xv),
            y0 + PANEL_H - MARGIN_B + 14.0,
            fmt_tick(xv)
        );
        let _ = write!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"end\">{}</text>",
            x0 + MARGIN_L - 4.0,
            py(yv) + 3.0,
            fmt_tick(yv)
        );
    }
    // Axis labels.
    let _ = write!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"middle\">{}</text>",
        x0 + MARGIN_L + plot_w / 2.0,
        y0 + PANEL_H - 8.0,
        panel.x_label
    );
    let _ = write!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"middle\" transform=\"rotate(-90 {:.1} {:.1})\">{}</text>",
        x0 + 14.0,
        y0 + MARGIN_T + plot_h / 2.0,
        x0 + 14.0,
        y0 + MARGIN_T + plot_h / 2.0,
        panel.y_label
    );

    for (si, s) in panel.series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let mut path = String::new();
        for (x, y) in s.points.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
            if path.is_empty() {
                let _ = write!(path, "M{:.2},{:.2}", px(*x), py(*y));
            } else {
                let _ = write!(path, " L{:.2},{:.2}", px(*x), py(*y));
            }
        }
        let _ = write!(
            svg,
            "<path d=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>"
        );
        // Legend entry.
        let ly = y0 + MARGIN_T + 14.0 + 14.0 * si as f64;
        let lx = x0 + PANEL_W - MARGIN_R - 110.0;
        let _ = write!(
            svg,
            "<line x1=\"{lx:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            ly - 3.0,
            lx + 18.0,
            ly - 3.0
        );
        let _ = write!(
            svg,
            "<text x=\"{:.1}\" y=\"{ly:.1}\" font-size=\"10\" font-family=\"sans-serif\">{}</text>",
            lx + 22.0,
            s.name
        );
    }
}

/// Renders panels in a single row and writes the file.
pub fn write_chart(path: &Path, panels: &[Panel<'_>]) -> Result<()> {
    let total_w = PANEL_W * panels.len() as f64;
    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total_w:.0}\" height=\"{PANEL_H:.0}\" viewBox=\"0 0 {total_w:.0} {PANEL_H:.0}\">"
    );
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    for (i, panel) in panels.iter().enumerate() {
        render_panel(&mut svg, panel, PANEL_W * i as f64, 0.0);
    }
    svg.push_str("</svg>\n");
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, svg)?;
    Ok(())
}
