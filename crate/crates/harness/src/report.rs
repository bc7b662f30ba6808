//! CSV, JSON and SVG output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::sweep::SweepResult;

pub const ROWS_HEADER: &str = "image_id,transform,value,cosine,spearman";

pub fn rows_csv(result: &SweepResult) -> String {
    let mut out = format!("{ROWS_HEADER}\n");
    for r in &result.rows {
        let _ = writeln!(out, "{},{},{},{},{}", r.image_id, r.transform.name(), r.value, r.cosine, r.spearman);
    }
    out
}

pub fn aggregates_csv(result: &SweepResult) -> String {
    let mut out = String::from("value,count,cosine_mean,cosine_var,spearman_mean,spearman_var\n");
    for a in &result.aggregates {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            a.value, a.count, a.cosine_mean, a.cosine_var, a.spearman_mean, a.spearman_var
        );
    }
    out
}

pub struct Series<'a> {
    pub name: &'a str,
    pub color: &'a str,
    pub points: Vec<(f64, f64)>,
}

fn bounds(series: &[Series]) -> (f64, f64, f64, f64) {
    let pts = series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        return (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    (x0, x1, y0, y1)
}

/// Simple polyline chart with axis extents labelled.
pub fn svg_chart(title: &str, x_label: &str, series: &[Series]) -> String {
    let (w, h, m) = (640.0, 400.0, 56.0);
    let (x0, x1, y0, y1) = bounds(series);
    let px = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let py = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, w / 2.0, escape(title));
    let _ = writeln!(s, r#"<path d="M{m},{m} V{} H{}" fill="none" stroke="black"/>"#, h - m, w - m);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, w / 2.0, h - 12.0, escape(x_label));
    for (v, x) in [(x0, px(x0)), (x1, px(x1))] {
        let _ = writeln!(s, r#"<text x="{x}" y="{}" text-anchor="middle">{}</text>"#, h - m + 16.0, fmt(v));
    }
    for (v, y) in [(y0, py(y0)), (y1, py(y1))] {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, m - 6.0, y + 4.0, fmt(v));
    }
    for (k, ser) in series.iter().enumerate() {
        let pts: Vec<String> = ser
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#, pts.join(" "), ser.color);
        let ly = m + 16.0 * k as f64;
        let _ = writeln!(s, r#"<text x="{}" y="{ly}" fill="{}">{}</text>"#, w - m - 120.0, ser.color, escape(ser.name));
    }
    s.push_str("</svg>\n");
    s
}

fn fmt(v: f64) -> String {
    format!("{v:.4}").trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn sweep_chart(result: &SweepResult) -> String {
    let cos = result.aggregates.iter().map(|a| (a.value, a.cosine_mean)).collect();
    let sp = result.aggregates.iter().map(|a| (a.value, a.spearman_mean)).collect();
    svg_chart(
        &format!("Mean similarity vs {}", result.transform.name()),
        result.transform.name(),
        &[
            Series { name: "cosine", color: "#1f77b4", points: cos },
            Series { name: "spearman", color: "#d62728", points: sp },
        ],
    )
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

pub fn write_text(text: &str, path: &Path) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// `sweep_<kind>.csv`, `sweep_<kind>_aggregates.csv`, `.json` and `.svg`.
pub fn write_sweep(result: &SweepResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let stem = format!("sweep_{}", result.transform.name());
    write_text(&rows_csv(result), &dir.join(format!("{stem}.csv")))?;
    write_text(&aggregates_csv(result), &dir.join(format!("{stem}_aggregates.csv")))?;
    write_json(result, &dir.join(format!("{stem}.json")))?;
    write_text(&sweep_chart(result), &dir.join(format!("{stem}.svg")))
}
