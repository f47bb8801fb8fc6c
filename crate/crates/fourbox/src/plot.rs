//! Minimal standalone SVG 1.1 line plots: one polyline per series, embedded
//! legend, optional stacked panels (used for the zoomed splitting view).

use std::fmt::Write;

/// One plotted curve.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// draw circle markers instead of a connected line
    pub markers: bool,
}

impl Series {
    pub fn line(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series {
            label: label.into(),
            points,
            markers: false,
        }
    }

    pub fn scatter(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series {
            label: label.into(),
            points,
            markers: true,
        }
    }
}

/// One panel of a figure, with optional fixed y-window for zoomed views.
#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub series: Vec<Series>,
    pub y_range: Option<(f64, f64)>,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Render one or more vertically stacked panels into a standalone SVG
/// document with a fixed 800x600 viewBox.
pub fn render(panels: &[Panel], x_label: &str, y_label: &str) -> String {
    assert!(!panels.is_empty());
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let panel_h = HEIGHT / panels.len() as f64;
    for (k, panel) in panels.iter().enumerate() {
        render_panel(
            &mut svg,
            panel,
            k as f64 * panel_h,
            panel_h,
            x_label,
            y_label,
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn render_panel(
    svg: &mut String,
    panel: &Panel,
    top: f64,
    height: f64,
    x_label: &str,
    y_label: &str,
) {
    let margin_l = 70.0;
    let margin_r = 140.0;
    let margin_t = 30.0;
    let margin_b = 45.0;
    let plot_w = WIDTH - margin_l - margin_r;
    let plot_h = height - margin_t - margin_b;

    let xs: Vec<f64> = panel
        .series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .collect();
    let (x_min, x_max) = bounds(&xs, None);
    let ys: Vec<f64> = panel
        .series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .collect();
    let (y_min, y_max) = bounds(&ys, panel.y_range);

    let to_x = |x: f64| margin_l + (x - x_min) / (x_max - x_min) * plot_w;
    let to_y = |y: f64| top + margin_t + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    // frame and title
    let _ = writeln!(
        svg,
        "<rect x=\"{margin_l}\" y=\"{}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"black\"/>",
        top + margin_t
    );
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{}</text>",
        margin_l + plot_w / 2.0,
        top + margin_t - 10.0,
        escape(&panel.title)
    );

    // ticks
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let xv = x_min + f * (x_max - x_min);
        let yv = y_min + f * (y_max - y_min);
        let xp = to_x(xv);
        let yp = to_y(yv);
        let _ = writeln!(
            svg,
            "<line x1=\"{xp}\" y1=\"{0}\" x2=\"{xp}\" y2=\"{1}\" stroke=\"black\"/>",
            top + margin_t + plot_h,
            top + margin_t + plot_h + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{xp}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            top + margin_t + plot_h + 18.0,
            tick(xv)
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{0}\" y1=\"{yp}\" x2=\"{margin_l}\" y2=\"{yp}\" stroke=\"black\"/>",
            margin_l - 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            margin_l - 8.0,
            yp + 4.0,
            tick(yv)
        );
    }

    // axis labels
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
        margin_l + plot_w / 2.0,
        top + height - 8.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 {0})\">{1}</text>",
        top + margin_t + plot_h / 2.0,
        escape(y_label)
    );

    // series and legend
    for (si, s) in panel.series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let visible: Vec<(f64, f64)> = s
            .points
            .iter()
            .filter(|&&(_, y)| y.is_finite() && y >= y_min && y <= y_max)
            .copied()
            .collect();
        if s.markers {
            for &(x, y) in &visible {
                let _ = writeln!(
                    svg,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"none\" stroke=\"{color}\"/>",
                    to_x(x),
                    to_y(y)
                );
            }
        } else {
            let pts: Vec<String> = visible
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", to_x(x), to_y(y)))
                .collect();
            if pts.len() >= 2 {
                let _ = writeln!(
                    svg,
                    "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
                    pts.join(" ")
                );
            }
        }
        let ly = top + margin_t + 14.0 + 16.0 * si as f64;
        let lx = WIDTH - margin_r + 10.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            lx + 18.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            lx + 24.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
}

fn bounds(values: &[f64], fixed: Option<(f64, f64)>) -> (f64, f64) {
    if let Some((lo, hi)) = fixed {
        assert!(hi > lo);
        return (lo, hi);
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-2..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
