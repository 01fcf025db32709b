//! Domain types: observed series, series pairs, window sizes and correlation tracks.
//!
//! Time is 1-based at every public boundary: the first observation is `t = 1`
//! and a windowed track's first entry sits at `t = ws`.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Slack admitted when checking that a correlation lies in `[-1, 1]`.
pub const CORRELATION_SLACK: f64 = 1e-12;

/// A finite-valued series of length at least two.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<F> {
    values: Vec<F>,
}

impl<F: Scalar> TimeSeries<F> {
    pub fn new(values: Vec<F>) -> Result<Self> {
        if values.len() < 2 {
            return invalid(format!("series needs at least 2 values, got {}", values.len()));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return invalid(format!("non-finite value at t = {}", pos + 1));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at 1-based time `t`.
    pub fn at(&self, t: usize) -> F {
        self.values[t - 1]
    }

    pub fn into_inner(self) -> Vec<F> {
        self.values
    }

    pub fn map(&self, f: impl Fn(F) -> F) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }
}

/// Two aligned series of identical length.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateSeries<F> {
    first: TimeSeries<F>,
    second: TimeSeries<F>,
}

impl<F: Scalar> BivariateSeries<F> {
    pub fn new(first: TimeSeries<F>, second: TimeSeries<F>) -> Result<Self> {
        if first.len() != second.len() {
            return invalid(format!("series lengths differ: {} vs {}", first.len(), second.len()));
        }
        Ok(Self { first, second })
    }

    pub fn from_vecs(first: Vec<F>, second: Vec<F>) -> Result<Self> {
        Self::new(TimeSeries::new(first)?, TimeSeries::new(second)?)
    }

    pub fn first(&self) -> &TimeSeries<F> {
        &self.first
    }

    pub fn second(&self) -> &TimeSeries<F> {
        &self.second
    }

    /// Common length `T`.
    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }
}

/// Width of the sliding window shared by the windowed estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct WindowSize(usize);

impl WindowSize {
    pub const DEFAULT: WindowSize = WindowSize(15);

    /// Accepts any width of at least one. Estimators check the upper bound
    /// against their series, and the sliding-window estimator additionally
    /// needs two points per window.
    pub fn new(ws: usize) -> Result<Self> {
        if ws == 0 {
            return invalid("window size must be positive");
        }
        Ok(Self(ws))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub(crate) fn check_fits(self, t_len: usize) -> Result<()> {
        if self.0 > t_len {
            return invalid(format!("window size {} exceeds series length {t_len}", self.0));
        }
        Ok(())
    }
}

impl Default for WindowSize {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Estimated correlation path. `None` marks a point with no defined estimate
/// (a zero-variance window).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTrack<F> {
    start_index: usize,
    values: Vec<Option<F>>,
}

impl<F: Scalar> CorrelationTrack<F> {
    pub fn new(start_index: usize, values: Vec<Option<F>>) -> Result<Self> {
        if start_index == 0 {
            return invalid("track start index is 1-based");
        }
        let slack = F::lit(CORRELATION_SLACK);
        for (k, v) in values.iter().enumerate() {
            if let Some(v) = v {
                if !(v.abs() <= F::one() + slack) {
                    return invalid(format!("correlation {v} out of range at t = {}", start_index + k));
                }
            }
        }
        Ok(Self { start_index, values })
    }

    /// Time index of the first entry.
    pub fn start_index(&self) -> usize {
        self.start_index
    }

    /// Time index of the last entry, i.e. the series length `T`.
    pub fn end_index(&self) -> usize {
        self.start_index + self.values.len() - 1
    }

    pub fn values(&self) -> &[Option<F>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry at 1-based time `t`; `None` outside the track's support or where missing.
    pub fn at(&self, t: usize) -> Option<F> {
        if t < self.start_index {
            return None;
        }
        self.values.get(t - self.start_index).copied().flatten()
    }

    /// `(t, value)` pairs over the track's support.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Option<F>)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, v)| (self.start_index + k, *v))
    }

    /// `(t, value)` pairs for the defined entries only.
    pub fn defined(&self) -> impl Iterator<Item = (usize, F)> + '_ {
        self.iter().filter_map(|(t, v)| v.map(|v| (t, v)))
    }

    pub fn missing_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }
}
