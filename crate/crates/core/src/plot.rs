//! Static SVG trace plots: density and best density against iteration.

use std::fmt::Write as _;

use crate::error::Result;
use crate::samplers::{read_trace_csv, TraceRecord};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 450.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

/// Parses trace CSV bytes and renders them. Output depends only on the input.
pub fn plot_trace_csv(csv: &[u8], title: &str) -> Result<String> {
    let records = read_trace_csv(csv)?;
    Ok(render_svg(&records, title))
}

/// One polyline per series (density, best density); axes only when empty.
pub fn render_svg(records: &[TraceRecord], title: &str) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let (x_min, x_max) = match (records.first(), records.last()) {
        (Some(a), Some(b)) if b.iteration > a.iteration => (a.iteration as f64, b.iteration as f64),
        (Some(a), Some(_)) => (a.iteration as f64 - 0.5, a.iteration as f64 + 0.5),
        _ => (0.0, 1.0),
    };
    let sx = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| TOP + (1.0 - y.clamp(0.0, 1.0)) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    // Axes and ticks.
    let _ = writeln!(
        svg,
        r#"<path d="M{LEFT} {TOP} V{} H{}" fill="none" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w
    );
    for i in 0..=4 {
        let y = i as f64 / 4.0;
        let py = sy(y);
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{y:.2}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0
        );
    }
    if !records.is_empty() {
        for i in 0..=4 {
            let x = x_min + (x_max - x_min) * i as f64 / 4.0;
            let px = sx(x);
            let _ = writeln!(
                svg,
                r#"<line x1="{px:.2}" y1="{}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
                TOP + plot_h,
                TOP + plot_h + 5.0,
                TOP + plot_h + 20.0,
                x.round()
            );
        }
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">iteration</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">edge density</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    if !records.is_empty() {
        type Series<'a> = (&'a str, &'a str, fn(&TraceRecord) -> f64);
        let series: [Series; 2] = [
            ("density", "#1f77b4", |r| r.density),
            ("best_density", "#d62728", |r| r.best_density),
        ];
        for (idx, (name, color, value)) in series.iter().enumerate() {
            let mut points = String::with_capacity(records.len() * 16);
            for r in records {
                let _ = write!(points, "{:.2},{:.2} ", sx(r.iteration as f64), sy(value(r)));
            }
            let _ = writeln!(
                svg,
                r#"<polyline class="{name}" fill="none" stroke="{color}" stroke-width="1" points="{}"/>"#,
                points.trim_end()
            );
            let ly = TOP + 12.0 + 16.0 * idx as f64;
            let lx = LEFT + plot_w - 130.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{name}</text>"#,
                lx + 20.0,
                lx + 26.0,
                ly + 4.0
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
