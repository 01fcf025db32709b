//! Track metrics and Monte Carlo aggregation.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::dcc::dcc_track;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;
use crate::series::{BivariateSeries, CorrelationTrack, WindowSize};
use crate::sim::{CorrelationProfile, SimDesign};
use crate::stats;
use crate::sw::sw_track;
use crate::wvga::wvga_track;

fn defined_or_err<F: Scalar>(track: &CorrelationTrack<F>) -> Result<Vec<(usize, F)>> {
    let v: Vec<_> = track.defined().collect();
    if v.is_empty() {
        return invalid("track has no defined entries");
    }
    Ok(v)
}

/// Mean of `|r|` over the defined entries.
pub fn mean_abs<F: Scalar>(track: &CorrelationTrack<F>) -> Result<F> {
    let v = defined_or_err(track)?;
    Ok(v.iter().map(|(_, r)| r.abs()).sum::<F>() / F::count(v.len()))
}

/// Maximum of `|r|` over the defined entries.
pub fn max_abs<F: Scalar>(track: &CorrelationTrack<F>) -> Result<F> {
    let v = defined_or_err(track)?;
    Ok(v.iter().map(|(_, r)| r.abs()).fold(F::zero(), F::max))
}

/// Mean squared deviation from `p(t)` over the defined entries.
pub fn mse<F: Scalar>(track: &CorrelationTrack<F>, profile: &CorrelationProfile) -> Result<F> {
    let v = defined_or_err(track)?;
    let sum = v
        .iter()
        .map(|&(t, r)| {
            let d = r - F::lit(profile.eval(t));
            d * d
        })
        .sum::<F>();
    Ok(sum / F::count(v.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sw,
    Wvga,
    Dcc,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Sw, Method::Wvga, Method::Dcc];

    pub fn name(self) -> &'static str {
        match self {
            Method::Sw => "sw",
            Method::Wvga => "wvga",
            Method::Dcc => "dcc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown method '{s}'")))
    }
}

/// Track from one method; `None` when the DCC fit did not converge.
pub fn estimate<F: Scalar>(
    series: &BivariateSeries<F>,
    method: Method,
    ws: WindowSize,
) -> Result<Option<CorrelationTrack<F>>> {
    match method {
        Method::Sw => sw_track(series, ws).map(Some),
        Method::Wvga => wvga_track(series, ws).map(Some),
        Method::Dcc => Ok(dcc_track(series)?.track),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RepSummary {
    pub mean_abs: f64,
    pub max_abs: f64,
    pub mse: Option<f64>,
    pub dnc: bool,
}

impl RepSummary {
    pub fn dnc() -> Self {
        Self {
            mean_abs: f64::NAN,
            max_abs: f64::NAN,
            mse: None,
            dnc: true,
        }
    }

    pub fn from_track<F: Scalar>(track: &CorrelationTrack<F>, profile: Option<&CorrelationProfile>) -> Result<Self> {
        Ok(Self {
            mean_abs: mean_abs(track)?.to_f64_lossy(),
            max_abs: max_abs(track)?.to_f64_lossy(),
            mse: profile.map(|p| mse(track, p)).transpose()?.map(Scalar::to_f64_lossy),
            dnc: false,
        })
    }
}

/// Mean, sample standard deviation (divisor `n - 1`, zero for one value) and median.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub sd: f64,
    pub median: f64,
}

impl Moments {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let median = stats::median(values).ok()?;
        Some(Self { mean, sd, median })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McSummary {
    pub method: Method,
    pub n_reps: usize,
    pub n_converged: usize,
    pub dnc: usize,
    pub all_dnc: bool,
    pub mean_abs: Option<Moments>,
    pub max_abs: Option<Moments>,
    pub mse: Option<Moments>,
    /// Per-repetition outcomes in repetition order.
    #[serde(skip)]
    pub reps: Vec<RepSummary>,
}

impl McSummary {
    pub fn aggregate(method: Method, reps: Vec<RepSummary>) -> Self {
        let ok: Vec<&RepSummary> = reps.iter().filter(|r| !r.dnc).collect();
        let col = |f: fn(&RepSummary) -> Option<f64>| -> Option<Moments> {
            let v: Vec<f64> = ok.iter().filter_map(|r| f(r)).collect();
            if v.len() != ok.len() {
                return None;
            }
            Moments::of(&v)
        };
        let n_converged = ok.len();
        Self {
            method,
            n_reps: reps.len(),
            n_converged,
            dnc: reps.len() - n_converged,
            all_dnc: n_converged == 0,
            mean_abs: col(|r| Some(r.mean_abs)),
            max_abs: col(|r| Some(r.max_abs)),
            mse: col(|r| r.mse),
            reps,
        }
    }

    /// Per-rep values of one metric over converged reps.
    pub fn values(&self, f: impl Fn(&RepSummary) -> Option<f64>) -> Vec<f64> {
        self.reps.iter().filter(|r| !r.dnc).filter_map(f).collect()
    }
}

/// Summary of one repetition: generate with the rep's seed, estimate, score.
pub fn run_rep(design: &SimDesign, method: Method, ws: WindowSize, rep: u64) -> Result<RepSummary> {
    let d = design.for_rep(rep);
    let series = d.generate::<f64>()?;
    match estimate(&series, method, ws)? {
        Some(track) => RepSummary::from_track(&track, Some(&d.profile)),
        None => Ok(RepSummary::dnc()),
    }
}

/// `n_reps` repetitions with seeds `design.seed + rep`. Reps run in parallel;
/// the result does not depend on scheduling.
pub fn mc_run(design: &SimDesign, method: Method, ws: WindowSize, n_reps: usize) -> Result<McSummary> {
    if n_reps == 0 {
        return invalid("need at least one repetition");
    }
    let reps = (0..n_reps as u64)
        .into_par_iter()
        .map(|rep| run_rep(design, method, ws, rep))
        .collect::<Result<Vec<_>>>()?;
    Ok(McSummary::aggregate(method, reps))
}
