use std::path::{Path, PathBuf};

use dyncorr::{BivariateSeries, DccReport, FitStatus, Method, Track, WindowSize};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::table::{fmt_opt, write_csv, write_json, Table};
use crate::EstimateArgs;

#[derive(Debug, Serialize)]
struct Sidecar {
    input: String,
    columns: [String; 2],
    t_len: usize,
    window: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    sw: Option<TrackStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wvga: Option<TrackStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dcc: Option<DccStats>,
}

#[derive(Debug, Serialize)]
struct TrackStats {
    start_index: usize,
    defined: usize,
    missing: usize,
    mean_abs: Option<f64>,
    max_abs: Option<f64>,
}

impl TrackStats {
    fn of(track: &Track) -> Self {
        Self {
            start_index: track.start_index(),
            defined: track.defined().count(),
            missing: track.missing_count(),
            mean_abs: dyncorr::mean_abs(track).ok(),
            max_abs: dyncorr::max_abs(track).ok(),
        }
    }
}

#[derive(Debug, Serialize)]
struct GarchStats {
    omega: f64,
    alpha: f64,
    beta: f64,
    converged: bool,
    loglik: Option<f64>,
}

#[derive(Debug, Serialize)]
struct DccStats {
    status: FitStatus,
    #[serde(flatten)]
    track: Option<TrackStats>,
    garch: [GarchStats; 2],
    a: Option<f64>,
    b: Option<f64>,
    s_bar12: Option<f64>,
    loglik: Option<f64>,
}

impl DccStats {
    fn of(report: &DccReport) -> Self {
        let finite = |v: f64| v.is_finite().then_some(v);
        let garch = report.garch.map(|g| GarchStats {
            omega: g.omega,
            alpha: g.alpha,
            beta: g.beta,
            converged: g.converged,
            loglik: finite(g.loglik),
        });
        Self {
            status: report.status,
            track: report.track.as_ref().map(TrackStats::of),
            garch,
            a: report.dcc.map(|d| d.a),
            b: report.dcc.map(|d| d.b),
            s_bar12: report.dcc.map(|d| d.s_bar_offdiag()),
            loglik: report.dcc.and_then(|d| finite(d.loglik)),
        }
    }
}

fn parse_methods(s: &str) -> CliResult<Vec<Method>> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Method::ALL.to_vec());
    }
    s.split(',')
        .map(|m| m.trim().parse::<Method>().map_err(|e| CliError::usage(e.to_string())))
        .collect()
}

fn resolve_column(table: &Table, key: &str) -> CliResult<usize> {
    if let Some(i) = table.index_of(key) {
        return Ok(i);
    }
    match key.parse::<usize>() {
        Ok(i) if (1..=table.headers.len()).contains(&i) => Ok(i - 1),
        _ => Err(CliError::data(format!("no column '{key}' in input"))),
    }
}

/// One pair's tracks plus the DCC report, keyed by method.
pub struct Estimates {
    pub t_len: usize,
    pub tracks: Vec<(Method, Option<Track>)>,
    dcc: Option<DccReport>,
}

pub fn estimate_pair(x1: Vec<f64>, x2: Vec<f64>, methods: &[Method], ws: WindowSize) -> CliResult<Estimates> {
    let series = BivariateSeries::from_vecs(x1, x2)?;
    let mut tracks = Vec::new();
    let mut dcc = None;
    for &m in methods {
        let track = match m {
            Method::Dcc => {
                let report = dyncorr::dcc_track(&series)?;
                let track = report.track.clone();
                dcc = Some(report);
                track
            }
            _ => dyncorr::estimate(&series, m, ws)?,
        };
        tracks.push((m, track));
    }
    Ok(Estimates {
        t_len: series.len(),
        tracks,
        dcc,
    })
}

fn write_outputs(est: &Estimates, out: &Path, input: &Path, names: [String; 2], ws: WindowSize) -> CliResult<()> {
    let mut header = vec!["t".to_string()];
    header.extend(est.tracks.iter().map(|(m, _)| format!("rho_{}", m.name())));
    let first = est
        .tracks
        .iter()
        .map(|(m, tr)| {
            tr.as_ref()
                .map_or(if *m == Method::Dcc { 1 } else { ws.get() }, Track::start_index)
        })
        .min()
        .unwrap_or(1);
    let rows = (first..=est.t_len).map(|t| {
        let mut row = vec![t.to_string()];
        row.extend(
            est.tracks
                .iter()
                .map(|(_, tr)| fmt_opt(tr.as_ref().and_then(|tr| tr.at(t)))),
        );
        row
    });
    write_csv(out, &header, rows)?;

    let stats = |method: Method| {
        est.tracks
            .iter()
            .find(|(m, _)| *m == method)
            .and_then(|(_, tr)| tr.as_ref())
            .map(TrackStats::of)
    };
    let sidecar = Sidecar {
        input: input.display().to_string(),
        columns: names,
        t_len: est.t_len,
        window: ws.get(),
        sw: stats(Method::Sw),
        wvga: stats(Method::Wvga),
        dcc: est.dcc.as_ref().map(DccStats::of),
    };
    write_json(&sidecar_path(out), &sidecar)
}

/// `<out>` with its extension replaced by `.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn run(args: &EstimateArgs) -> CliResult<()> {
    let methods = parse_methods(&args.method)?;
    let ws = WindowSize::new(args.window).map_err(|e| CliError::usage(e.to_string()))?;
    let table = Table::read(&args.input)?;
    let data = table.data_columns();

    let pairs: Vec<(usize, usize)> = if args.pairs.is_some() {
        data.iter()
            .enumerate()
            .flat_map(|(k, &a)| data[k + 1..].iter().map(move |&b| (a, b)))
            .collect()
    } else if let Some(cols) = &args.cols {
        if cols.len() != 2 {
            return Err(CliError::usage(format!(
                "--cols takes exactly two columns, got {}",
                cols.len()
            )));
        }
        vec![(resolve_column(&table, &cols[0])?, resolve_column(&table, &cols[1])?)]
    } else if data.len() >= 2 {
        vec![(data[0], data[1])]
    } else {
        vec![]
    };
    if pairs.is_empty() {
        return Err(CliError::data("input needs at least two numeric data columns"));
    }
    if args.pairs.is_some() {
        std::fs::create_dir_all(&args.out).map_err(|e| CliError::data(format!("{}: {e}", args.out.display())))?;
    }

    for (a, b) in pairs {
        let est = estimate_pair(table.dense(a)?, table.dense(b)?, &methods, ws)?;
        let names = [table.headers[a].clone(), table.headers[b].clone()];
        let out = if args.pairs.is_some() {
            args.out
                .join(format!("{}__{}.csv", file_stem(&names[0]), file_stem(&names[1])))
        } else {
            args.out.clone()
        };
        write_outputs(&est, &out, &args.input, names, ws)?;
    }
    Ok(())
}
