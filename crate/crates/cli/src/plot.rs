//! Standalone SVG line chart of throughput against image size.

use std::fmt::Write as _;

use crate::bench::BenchRecord;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_Y: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One polyline per scheme; x is log2 of the image width, y is GB/s.
pub fn render_svg(title: &str, records: &[BenchRecord]) -> String {
    let mut schemes: Vec<&str> = Vec::new();
    for r in records {
        if !schemes.contains(&r.scheme.as_str()) {
            schemes.push(&r.scheme);
        }
    }
    let log_sizes: Vec<f64> = records.iter().map(|r| (r.width as f64).log2()).collect();
    let x_min = log_sizes.iter().copied().fold(f64::INFINITY, f64::min);
    let x_max = log_sizes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (x_min, x_max) = if x_min.is_finite() && x_max > x_min { (x_min, x_max) } else { (0.0, 1.0) };
    let y_max = records.iter().map(|r| r.gbps).fold(0.0, f64::max).max(1e-9) * 1.1;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - 2.0 * MARGIN_Y;
    let px = |lx: f64| MARGIN_LEFT + (lx - x_min) / (x_max - x_min) * plot_w;
    let py = |g: f64| MARGIN_Y + plot_h - g / y_max * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="28" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        escape(title)
    );
    let (x0, y0, x1, y1) = (MARGIN_LEFT, MARGIN_Y + plot_h, MARGIN_LEFT + plot_w, MARGIN_Y);
    let _ = writeln!(
        s,
        r#"<path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" fill="none" stroke="black"/>"#
    );
    let mut lx = x_min.ceil();
    while lx <= x_max {
        let x = px(lx);
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            y0 + 16.0,
            2f64.powf(lx).round()
        );
        lx += 1.0;
    }
    for i in 0..=4 {
        let g = y_max * i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{g:.3}</text>"#,
            x0 - 6.0,
            py(g) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">image size (pixels per side)</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.1})">GB/s</text>"#,
        MARGIN_Y + plot_h / 2.0,
        MARGIN_Y + plot_h / 2.0
    );
    for (i, scheme) in schemes.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = records
            .iter()
            .filter(|r| r.scheme == *scheme)
            .map(|r| format!("{:.1},{:.1}", px((r.width as f64).log2()), py(r.gbps)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline data-scheme="{}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            escape(scheme),
            points.join(" ")
        );
        let ly = MARGIN_Y + 10.0 + 20.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            x1 + 15.0,
            x1 + 35.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            x1 + 40.0,
            ly + 4.0,
            escape(scheme)
        );
    }
    s.push_str("</svg>\n");
    s
}
