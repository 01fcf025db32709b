//! Minimal SVG line chart: fixed y range [-1, 1], one `<g>` per series and
//! one `<polyline>` per run of defined values.

use std::fmt::Write as _;

use crate::error::{at_path, CliError, CliResult};
use crate::table::Table;
use crate::PlotArgs;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;

/// A named series over integer time with gaps.
#[derive(Debug, Clone)]
pub struct Line {
    pub name: String,
    pub color: &'static str,
    pub points: Vec<(f64, Option<f64>)>,
}

impl Line {
    /// Runs of consecutive defined points.
    pub fn segments(&self) -> Vec<Vec<(f64, f64)>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        for &(t, v) in &self.points {
            match v {
                Some(v) => cur.push((t, v)),
                None if !cur.is_empty() => out.push(std::mem::take(&mut cur)),
                None => {}
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
        out
    }
}

fn color_for(name: &str, k: usize) -> &'static str {
    const CYCLE: [&str; 5] = ["#ff7f0e", "#8c564b", "#17becf", "#bcbd22", "#7f7f7f"];
    match name {
        "rho_sw" => "#1f4fd6",
        "rho_wvga" => "#c21fc2",
        "rho_dcc" => "#1a9641",
        _ => CYCLE[k % CYCLE.len()],
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn time_column(table: &Table, path: &std::path::Path) -> CliResult<Vec<f64>> {
    if table.headers.is_empty() || !table.has_time_column() {
        return Err(CliError::data(format!("{}: first column must be 't'", path.display())));
    }
    table.dense(0)
}

pub fn track_lines(table: &Table, path: &std::path::Path) -> CliResult<Vec<Line>> {
    let t = time_column(table, path)?;
    if table.headers.len() < 2 {
        return Err(CliError::data(format!("{}: no track columns", path.display())));
    }
    Ok((1..table.headers.len())
        .map(|c| Line {
            name: table.headers[c].clone(),
            color: color_for(&table.headers[c], c - 1),
            points: t.iter().copied().zip(table.columns[c].iter().copied()).collect(),
        })
        .collect())
}

fn truth_line(table: &Table, path: &std::path::Path) -> CliResult<Line> {
    let t = time_column(table, path)?;
    let c = table
        .index_of("p_true")
        .ok_or_else(|| CliError::data(format!("{}: no 'p_true' column", path.display())))?;
    Ok(Line {
        name: "p_true".into(),
        color: "#000000",
        points: t.into_iter().zip(table.columns[c].iter().copied()).collect(),
    })
}

pub fn render(lines: &[Line]) -> String {
    let (mut t_min, mut t_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (t, _) in lines.iter().flat_map(|l| &l.points) {
        t_min = t_min.min(*t);
        t_max = t_max.max(*t);
    }
    if !t_min.is_finite() {
        (t_min, t_max) = (0.0, 1.0);
    }
    if t_max <= t_min {
        t_max = t_min + 1.0;
    }
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |t: f64| LEFT + (t - t_min) / (t_max - t_min) * plot_w;
    let sy = |v: f64| TOP + (1.0 - v.clamp(-1.0, 1.0)) / 2.0 * plot_h;
    let (x0, x1, y0, y1) = (LEFT, LEFT + plot_w, TOP, TOP + plot_h);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    s.push_str("<g class=\"axes\" stroke=\"#444\" stroke-width=\"1\">\n");
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#);
    let zero = sy(0.0);
    let _ = writeln!(
        s,
        r##"<line x1="{x0}" y1="{zero}" x2="{x1}" y2="{zero}" stroke="#bbb" stroke-dasharray="4 3"/>"##
    );
    for v in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let y = sy(v);
        let _ = writeln!(s, r#"<line x1="{}" y1="{y}" x2="{x0}" y2="{y}"/>"#, x0 - 4.0);
        let _ = writeln!(
            s,
            r##"<text x="{}" y="{}" text-anchor="end" stroke="none" fill="#222">{v}</text>"##,
            x0 - 7.0,
            y + 4.0
        );
    }
    for k in 0..=4 {
        let t = t_min + (t_max - t_min) * k as f64 / 4.0;
        let x = sx(t);
        let _ = writeln!(s, r#"<line x1="{x}" y1="{y1}" x2="{x}" y2="{}"/>"#, y1 + 4.0);
        let _ = writeln!(
            s,
            r##"<text x="{x}" y="{}" text-anchor="middle" stroke="none" fill="#222">{}</text>"##,
            y1 + 18.0,
            t.round()
        );
    }
    let _ = writeln!(
        s,
        r##"<text x="{}" y="{}" text-anchor="middle" stroke="none" fill="#222">t</text>"##,
        (x0 + x1) / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r##"<text x="15" y="{0}" text-anchor="middle" stroke="none" fill="#222" transform="rotate(-90 15 {0})">correlation</text>"##,
        (y0 + y1) / 2.0
    );
    s.push_str("</g>\n");

    for line in lines {
        let _ = writeln!(
            s,
            r#"<g class="series" data-name="{}" fill="none" stroke="{}" stroke-width="1.5">"#,
            escape(&line.name),
            line.color
        );
        for seg in line.segments() {
            let pts: Vec<String> = seg.iter().map(|&(t, v)| format!("{:.2},{:.2}", sx(t), sy(v))).collect();
            let _ = writeln!(s, r#"<polyline points="{}"/>"#, pts.join(" "));
        }
        s.push_str("</g>\n");
    }

    s.push_str("<g class=\"legend\">\n");
    for (k, line) in lines.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * k as f64;
        let lx = x1 + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{y}" x2="{}" y2="{y}" stroke="{}" stroke-width="2"/>"#,
            lx + 25.0,
            line.color
        );
        let _ = writeln!(
            s,
            r##"<text x="{}" y="{}" fill="#222">{}</text>"##,
            lx + 32.0,
            y + 4.0,
            escape(&line.name)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

pub fn run(args: &PlotArgs) -> CliResult<()> {
    let table = Table::read(&args.input)?;
    let mut lines = track_lines(&table, &args.input)?;
    if let Some(path) = &args.truth {
        lines.push(truth_line(&Table::read(path)?, path)?);
    }
    at_path(std::fs::write(&args.out, render(&lines)), &args.out)
}
