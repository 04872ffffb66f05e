//! SVG line chart of `Div(n)/n`.
//!
//! Fixed 640x400 canvas, coordinates printed with two decimals. Bounded rows
//! are filled dots joined by a line; lower bounds (sampled or horizon rows)
//! are hollow dots. An unbounded row breaks the line and gets a dashed
//! vertical rule with a cross at the top of the plot area.

use std::fmt::Write;
use std::path::Path;

use coxdiv::divergence::{DivergenceReport, RowStatus};

use crate::CliError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 52.0;

pub fn emit_plot(report: &DivergenceReport, path: &Path) -> Result<(), CliError> {
    let svg = render_svg(report)?;
    std::fs::write(path, svg).map_err(|e| CliError::io(path, e))
}

pub fn render_svg(report: &DivergenceReport) -> Result<String, CliError> {
    if report.rows.is_empty() {
        return Err(CliError::Config("cannot plot an empty divergence report".into()));
    }
    let max_n = report.rows.iter().map(|r| r.n).max().unwrap_or(1).max(1);
    let ratio_max = report.max_ratio().unwrap_or(1.0);
    let y_max = ratio_max.ceil().max(1.0);
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let x = |n: f64| LEFT + n / max_n as f64 * pw;
    let y = |v: f64| TOP + ph - v / y_max * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="640" height="400" viewBox="0 0 640 400" font-family="sans-serif">"#
    );
    let _ = writeln!(s, r#"<rect width="640" height="400" fill="white"/>"#);
    let title = format!("{}  delta={} lambda={}", report.oracle, report.query.delta, report.query.lambda);
    let _ = writeln!(s, r#"<text x="320.00" y="24.00" text-anchor="middle" font-size="14">{}</text>"#, escape(&title));

    let _ = writeln!(s, r#"<g class="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, LEFT, TOP + ph, LEFT + pw, TOP + ph);
    let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, LEFT, TOP, LEFT, TOP + ph);
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g class="ticks" font-size="11">"#);
    let x_step = max_n.div_ceil(10);
    for n in (0..=max_n).step_by(x_step) {
        let px = x(n as f64);
        let _ = writeln!(s, r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, TOP + ph, TOP + ph + 4.0);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{n}</text>"#, TOP + ph + 18.0);
    }
    let y_top = y_max as usize;
    let y_step = y_top.div_ceil(8).max(1);
    for v in (0..=y_top).step_by(y_step) {
        let py = y(v as f64);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="black"/>"#, LEFT - 4.0, LEFT);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v}</text>"#, LEFT - 8.0, py + 4.0);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12">n</text>"#, LEFT + pw / 2.0, HEIGHT - 12.0);
    let _ = writeln!(
        s,
        r#"<text x="16.00" y="{:.2}" text-anchor="middle" font-size="12" transform="rotate(-90 16.00 {:.2})">Div(n)/n</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    // Line segments between consecutive bounded rows.
    let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    for r in &report.rows {
        match r.value {
            Some(v) => runs.last_mut().expect("nonempty").push((x(r.n as f64), y(v as f64 / r.n as f64))),
            None => runs.push(Vec::new()),
        }
    }
    for run in runs.iter().filter(|r| r.len() > 1) {
        let pts: Vec<String> = run.iter().map(|(px, py)| format!("{px:.2},{py:.2}")).collect();
        let _ = writeln!(s, r#"<polyline class="series" fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#, pts.join(" "));
    }

    for r in &report.rows {
        let px = x(r.n as f64);
        match r.value {
            Some(v) => {
                let py = y(v as f64 / r.n as f64);
                let fill = if r.status == RowStatus::Exact { "steelblue" } else { "white" };
                let _ = writeln!(
                    s,
                    r#"<circle class="point" cx="{px:.2}" cy="{py:.2}" r="4.00" fill="{fill}" stroke="steelblue" stroke-width="1.5"><title>n={} div={} {}</title></circle>"#,
                    r.n, v, r.status
                );
            }
            None => {
                let _ = writeln!(s, r#"<g class="gap">"#);
                let _ = writeln!(
                    s,
                    r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="crimson" stroke-dasharray="4 3"/>"#,
                    TOP,
                    TOP + ph
                );
                let _ = writeln!(
                    s,
                    r#"<path class="gap-marker" d="M{:.2} {:.2} L{:.2} {:.2} M{:.2} {:.2} L{:.2} {:.2}" stroke="crimson" stroke-width="2"><title>n={} UNBOUNDED</title></path>"#,
                    px - 5.0,
                    TOP - 5.0,
                    px + 5.0,
                    TOP + 5.0,
                    px - 5.0,
                    TOP + 5.0,
                    px + 5.0,
                    TOP - 5.0,
                    r.n
                );
                let _ = writeln!(s, "</g>");
            }
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
