use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::table::{parse_params, CsvRow};
use crate::error::Result;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];
const PANEL_W: f64 = 380.0;
const PANEL_H: f64 = 270.0;
const HEADER_H: f64 = 36.0;
const COLUMNS: usize = 3;
// plot area insets within a panel
const LEFT: f64 = 64.0;
const RIGHT: f64 = 14.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 42.0;

#[derive(Debug, Clone)]
struct Series {
    label: String,
    points: Vec<(f64, f64)>,
    dashed: bool,
}

#[derive(Debug, Clone)]
struct Panel {
    title: String,
    series: Vec<Series>,
}

#[derive(Debug, Clone)]
struct Chart {
    title: String,
    x_label: String,
    y_label: String,
    log_x: bool,
    log_y: bool,
    panels: Vec<Panel>,
}

/// Writes one SVG per plot family present in `rows`: area against its bound, capacity
/// against the lower bounds, and the `|f|/R` ratio near the origin. Returns the written
/// paths; an empty report writes nothing.
pub fn emit_plots(rows: &[CsvRow], dir: &Path) -> Result<Vec<PathBuf>> {
    let charts = [("area.svg", area_chart(rows)), ("capacity.svg", capacity_chart(rows)), ("ratio.svg", ratio_chart(rows))];
    let mut written = Vec::new();
    for (name, chart) in charts {
        let Some(chart) = chart else { continue };
        fs::create_dir_all(dir)?;
        let path = dir.join(name);
        fs::write(&path, render(&chart))?;
        written.push(path);
    }
    Ok(written)
}

/// Groups rows by their parameters minus `x_key`, preserving first-appearance order.
fn group_by_without<'a>(rows: impl Iterator<Item = &'a CsvRow>, x_key: &str) -> Vec<(String, Vec<(f64, &'a CsvRow)>)> {
    let mut groups: Vec<(String, Vec<(f64, &CsvRow)>)> = Vec::new();
    for row in rows {
        let pairs = parse_params(&row.params);
        let Some(x) = pairs.iter().find(|(k, _)| *k == x_key).and_then(|(_, v)| v.parse::<f64>().ok()) else {
            continue;
        };
        let key = pairs.iter().filter(|(k, _)| *k != x_key).map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push((x, row)),
            None => groups.push((key, vec![(x, row)])),
        }
    }
    for (_, members) in &mut groups {
        members.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    groups
}

fn area_chart(rows: &[CsvRow]) -> Option<Chart> {
    let groups = group_by_without(rows.iter().filter(|r| r.check == "area_distortion"), "r");
    let panels: Vec<Panel> = groups
        .into_iter()
        .map(|(title, members)| Panel {
            title,
            series: vec![
                Series { label: "area".into(), points: members.iter().map(|(x, r)| (*x, r.lhs)).collect(), dashed: false },
                Series { label: "bound".into(), points: members.iter().map(|(x, r)| (*x, r.rhs)).collect(), dashed: true },
            ],
        })
        .collect();
    chart("image area vs bound", "r", "area", false, false, panels)
}

fn capacity_chart(rows: &[CsvRow]) -> Option<Chart> {
    let groups = group_by_without(rows.iter().filter(|r| r.check.starts_with("capacity_vs_")), "p");
    let panels = groups
        .into_iter()
        .map(|(title, members)| {
            // the diameter rows also carry gamma; group titles keep only the condenser
            let title = title.split(' ').filter(|kv| !kv.starts_with("gamma=")).collect::<Vec<_>>().join(" ");
            let mut capacity: Vec<(f64, f64)> = members.iter().map(|(x, r)| (*x, r.rhs)).collect();
            capacity.dedup_by(|a, b| a.0 == b.0);
            let mut series = vec![Series { label: "capacity".into(), points: capacity, dashed: false }];
            for (check, label) in [
                ("capacity_vs_perimeter_bound", "perimeter bound"),
                ("capacity_vs_measure_bound", "measure bound"),
                ("capacity_vs_diameter_bound", "diameter bound"),
            ] {
                let points: Vec<(f64, f64)> = members.iter().filter(|(_, r)| r.check == check).map(|(x, r)| (*x, r.lhs)).collect();
                if !points.is_empty() {
                    series.push(Series { label: label.into(), points, dashed: true });
                }
            }
            (title, series)
        })
        .fold(Vec::<Panel>::new(), |mut panels, (title, series)| {
            match panels.iter_mut().find(|p| p.title == title) {
                Some(panel) => {
                    for s in series {
                        match panel.series.iter_mut().find(|t| t.label == s.label) {
                            Some(t) => t.points.extend(s.points),
                            None => panel.series.push(s),
                        }
                    }
                    for s in &mut panel.series {
                        s.points.sort_by(|a, b| a.0.total_cmp(&b.0));
                        s.points.dedup_by(|a, b| a.0 == b.0);
                    }
                }
                None => panels.push(Panel { title, series }),
            }
            panels
        });
    chart("capacity vs lower bounds", "p", "capacity", false, true, panels)
}

fn ratio_chart(rows: &[CsvRow]) -> Option<Chart> {
    let groups = group_by_without(rows.iter().filter(|r| r.check == "point_ratio"), "r");
    let panels = groups
        .into_iter()
        .map(|(title, members)| Panel {
            title,
            series: vec![
                Series { label: "|f|/R".into(), points: members.iter().map(|(x, r)| (*x, r.lhs)).collect(), dashed: false },
                Series { label: "1".into(), points: members.iter().map(|(x, _)| (*x, 1.0)).collect(), dashed: true },
            ],
        })
        .collect();
    chart("|f|/R toward the origin", "r", "ratio", true, false, panels)
}

fn chart(title: &str, x: &str, y: &str, log_x: bool, log_y: bool, panels: Vec<Panel>) -> Option<Chart> {
    if panels.is_empty() {
        return None;
    }
    Some(Chart { title: title.into(), x_label: x.into(), y_label: y.into(), log_x, log_y, panels })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn transform(v: f64, log: bool) -> Option<f64> {
    let t = if log {
        if v > 0.0 {
            v.log10()
        } else {
            return None;
        }
    } else {
        v
    };
    t.is_finite().then_some(t)
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let span = hi - lo;
    if span <= 1e-12 * lo.abs().max(1.0) {
        let pad = 0.5 * lo.abs().max(1e-3);
        (lo - pad, hi + pad)
    } else {
        (lo - 0.05 * span, hi + 0.05 * span)
    }
}

fn tick_label(v: f64, log: bool) -> String {
    let v = if log { 10f64.powf(v) } else { v };
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}").trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn render(chart: &Chart) -> String {
    let n = chart.panels.len();
    let cols = n.min(COLUMNS);
    let rows = n.div_ceil(cols);
    let width = cols as f64 * PANEL_W;
    let height = HEADER_H + rows as f64 * PANEL_H;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.1}" y="24" font-size="16" text-anchor="middle">{}</text>"#, width / 2.0, escape(&chart.title));
    for (i, panel) in chart.panels.iter().enumerate() {
        let ox = (i % cols) as f64 * PANEL_W;
        let oy = HEADER_H + (i / cols) as f64 * PANEL_H;
        render_panel(&mut s, chart, panel, ox, oy);
    }
    s.push_str("</svg>\n");
    s
}

fn render_panel(s: &mut String, chart: &Chart, panel: &Panel, ox: f64, oy: f64) {
    let pts: Vec<Vec<(f64, f64)>> = panel
        .series
        .iter()
        .map(|series| {
            series
                .points
                .iter()
                .filter_map(|&(x, y)| Some((transform(x, chart.log_x)?, transform(y, chart.log_y)?)))
                .collect()
        })
        .collect();
    let (x0, x1) = padded_range(pts.iter().flatten().map(|p| p.0));
    let (y0, y1) = padded_range(pts.iter().flatten().map(|p| p.1));
    let (left, top) = (ox + LEFT, oy + TOP);
    let (w, h) = (PANEL_W - LEFT - RIGHT, PANEL_H - TOP - BOTTOM);
    let px = |x: f64| left + (x - x0) / (x1 - x0) * w;
    let py = |y: f64| top + h - (y - y0) / (y1 - y0) * h;

    let _ = writeln!(s, r#"<g>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle">{}</text>"#,
        left + w / 2.0,
        oy + 18.0,
        escape(&panel.title)
    );
    let _ = writeln!(s, r##"<rect x="{left:.1}" y="{top:.1}" width="{w:.1}" height="{h:.1}" fill="none" stroke="#444"/>"##);
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ = writeln!(
            s,
            r##"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}" stroke="#ddd"/><text x="{0:.1}" y="{3:.1}" font-size="9" text-anchor="middle">{4}</text>"##,
            px(xv),
            top,
            top + h,
            top + h + 12.0,
            tick_label(xv, chart.log_x)
        );
        let _ = writeln!(
            s,
            r##"<line x1="{0:.1}" y1="{1:.1}" x2="{2:.1}" y2="{1:.1}" stroke="#ddd"/><text x="{3:.1}" y="{4:.1}" font-size="9" text-anchor="end">{5}</text>"##,
            left,
            py(yv),
            left + w,
            left - 4.0,
            py(yv) + 3.0,
            tick_label(yv, chart.log_y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{}</text>"#,
        left + w / 2.0,
        top + h + 28.0,
        escape(&axis_label(&chart.x_label, chart.log_x))
    );
    let _ = writeln!(
        s,
        r#"<text x="{0:.1}" y="{1:.1}" font-size="10" text-anchor="middle" transform="rotate(-90 {0:.1} {1:.1})">{2}</text>"#,
        ox + 14.0,
        top + h / 2.0,
        escape(&axis_label(&chart.y_label, chart.log_y))
    );
    for (k, (series, points)) in panel.series.iter().zip(&pts).enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let dash = if series.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let coords = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, r#"<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.6"{dash}/>"#);
        let ly = top + 12.0 + 13.0 * k as f64;
        let lx = left + w - 96.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="1.6"{dash}/><text x="{:.1}" y="{:.1}" font-size="9">{}</text>"#,
            lx + 18.0,
            lx + 22.0,
            ly + 3.0,
            escape(&series.label)
        );
    }
    let _ = writeln!(s, "</g>");
}

fn axis_label(name: &str, log: bool) -> String {
    if log {
        format!("{name} (log)")
    } else {
        name.to_string()
    }
}
