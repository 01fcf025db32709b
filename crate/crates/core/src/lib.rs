//! Time-varying correlation between two series.
//!
//! Three estimators share one track type:
//!
//! * [`sw_track`]: Pearson correlation over a sliding window;
//! * [`wvga_track`]: correlation of windowed median visibility-graph weight
//!   vectors, robust to extreme values because every weight is an angle;
//! * [`dcc_track`]: two-stage Gaussian quasi-ML DCC(1,1) over GARCH(1,1).
//!
//! [`sim`] generates the normal and clipped-Cauchy benchmark designs and
//! [`metrics`] scores tracks and aggregates Monte Carlo runs.
//!
//! The numerical kernels are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the common `f64` instantiation.

// `!(a < b)` is used deliberately so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dcc;
pub mod error;
pub mod garch;
pub mod metrics;
pub mod optim;
pub mod scalar;
pub mod series;
pub mod sim;
pub mod stats;
pub mod sw;
pub mod wvga;

pub use dcc::{dcc_filter, dcc_fit, dcc_loglik, dcc_q_path, dcc_track, DccFitReport, DccParams, FitStatus, QMatrix};
pub use error::{Error, Result};
pub use garch::{garch_filter, garch_fit, garch_loglik, GarchFit, GarchParams};
pub use metrics::{estimate, max_abs, mc_run, mean_abs, mse, McSummary, Method, Moments, RepSummary};
pub use optim::{minimize, OptimResult};
pub use scalar::Scalar;
pub use series::{BivariateSeries, CorrelationTrack, TimeSeries, WindowSize};
pub use sim::{
    cauchy_shape_at, cov_at, gen_cauchy_pair, gen_normal_pair, profile_eval, shape_at, CorrelationProfile, Design,
    Dist, SimDesign,
};
pub use stats::{median, pearson};
pub use sw::sw_track;
pub use wvga::{median_weight_vector, visibility_weight, weight_matrix, wvga_track, MedianWeightVector, WeightMatrix};

pub type Series = TimeSeries<f64>;
pub type Pair = BivariateSeries<f64>;
pub type Track = CorrelationTrack<f64>;
pub type Weights = WeightMatrix<f64>;
pub type Garch = GarchParams<f64>;
pub type Dcc = DccParams<f64>;
pub type DccReport = DccFitReport<f64>;

pub type Series32 = TimeSeries<f32>;
pub type Pair32 = BivariateSeries<f32>;
pub type Track32 = CorrelationTrack<f32>;
