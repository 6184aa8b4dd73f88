//! Mean cost against mean time, one series per planner, with standard-error
//! bars on both axes.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::BenchError;
use crate::run::SummaryRow;
use crate::spec::PlannerKind;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

struct Range {
    lo: f64,
    hi: f64,
}

impl Range {
    fn of(values: impl Iterator<Item = f64>) -> Range {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo > hi {
            return Range { lo: 0.0, hi: 1.0 };
        }
        let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.05 * lo.abs().max(1e-3) };
        Range {
            lo: lo - pad,
            hi: hi + pad,
        }
    }

    fn unit(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }
}

fn usable(r: &SummaryRow) -> bool {
    r.mean_cost.is_finite() && r.mean_time_s.is_finite()
}

fn err(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// Renders the plot. Output depends only on `summary`.
pub fn render_cost_time_svg(summary: &[SummaryRow]) -> String {
    let rows: Vec<&SummaryRow> = summary.iter().filter(|r| usable(r)).collect();
    let xr = Range::of(rows.iter().flat_map(|r| {
        let e = err(r.std_mean_time_s);
        [r.mean_time_s - e, r.mean_time_s + e]
    }));
    let yr = Range::of(rows.iter().flat_map(|r| {
        let e = err(r.std_mean_cost);
        [r.mean_cost - e, r.mean_cost + e]
    }));
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |v: f64| LEFT + xr.unit(v) * pw;
    let py = |v: f64| TOP + (1.0 - yr.unit(v)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">mean cost vs mean time</text>"#,
        LEFT + pw / 2.0,
        TOP - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">mean time (s)</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">mean cost</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let (xv, yv) = (xr.lo + f * (xr.hi - xr.lo), yr.lo + f * (yr.hi - yr.lo));
        let (x, y) = (px(xv), py(yv));
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 20.0,
            tick_label(xv)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
            tick_label(yv)
        );
    }

    let mut planners: Vec<PlannerKind> = Vec::new();
    for r in &rows {
        if !planners.contains(&r.planner) {
            planners.push(r.planner);
        }
    }
    for (k, p) in planners.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut series: Vec<&&SummaryRow> = rows.iter().filter(|r| r.planner == *p).collect();
        series.sort_by_key(|r| r.n);
        let _ = writeln!(s, r#"<g class="series" data-planner="{p}">"#);
        if series.len() > 1 {
            let pts: Vec<String> = series
                .iter()
                .map(|r| format!("{:.2},{:.2}", px(r.mean_time_s), py(r.mean_cost)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                pts.join(" ")
            );
        }
        for r in &series {
            let (x, y) = (px(r.mean_time_s), py(r.mean_cost));
            let (ec, et) = (err(r.std_mean_cost), err(r.std_mean_time_s));
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="{color}"/>"#,
                py(r.mean_cost - ec),
                py(r.mean_cost + ec)
            );
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}"/>"#,
                px(r.mean_time_s - et),
                px(r.mean_time_s + et)
            );
            let _ = writeln!(
                s,
                r#"<circle class="marker" cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"><title>{p} n={}</title></circle>"#,
                r.n
            );
        }
        let _ = writeln!(s, "</g>");
        let ly = TOP + 20.0 * k as f64 + 10.0;
        let lx = WIDTH - RIGHT + 20.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{p}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick_label(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

pub fn emit_cost_time_svg(summary: &[SummaryRow], out_path: impl AsRef<Path>) -> Result<(), BenchError> {
    std::fs::write(out_path, render_cost_time_svg(summary))?;
    Ok(())
}
