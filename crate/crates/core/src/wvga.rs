//! Weighted visibility graph correlation.
//!
//! Each series becomes a complete graph on its time points. The edge between
//! `t_a < t_b` carries the signed angle `arctan((x(t_b) - x(t_a)) / (t_b - t_a))`
//! in radians, and row `i` of the resulting symmetric matrix (zero diagonal)
//! is the weight vector of node `i`. For a window ending at `i`, the
//! element-wise median of the rows `i - ws + 1 ..= i` summarizes the window,
//! and the track entry is the Pearson correlation of the two series' median
//! vectors over all `T` positions.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;
use crate::series::{BivariateSeries, CorrelationTrack, TimeSeries, WindowSize};
use crate::stats::{median_in_place, pearson};

/// Signed visibility angle between two samples `gap` steps apart.
pub fn visibility_weight<F: Scalar>(x_a: F, x_b: F, gap: usize) -> Result<F> {
    if gap == 0 {
        return invalid("visibility weight needs a positive gap");
    }
    Ok(((x_b - x_a) / F::count(gap)).atan())
}

/// Dense symmetric `T x T` matrix of visibility weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix<F> {
    t_len: usize,
    data: Vec<F>,
}

impl<F: Scalar> WeightMatrix<F> {
    pub fn t_len(&self) -> usize {
        self.t_len
    }

    /// Weight between 1-based time points `a` and `b`.
    pub fn weight(&self, a: usize, b: usize) -> F {
        self.data[(a - 1) * self.t_len + (b - 1)]
    }

    /// Weight vector of node `i` (1-based).
    pub fn row(&self, i: usize) -> &[F] {
        let start = (i - 1) * self.t_len;
        &self.data[start..start + self.t_len]
    }

    pub fn as_slice(&self) -> &[F] {
        &self.data
    }
}

pub fn weight_matrix<F: Scalar>(x: &TimeSeries<F>) -> WeightMatrix<F> {
    let v = x.values();
    let n = v.len();
    let mut data = vec![F::zero(); n * n];
    for a in 0..n {
        for b in a + 1..n {
            let w = ((v[b] - v[a]) / F::count(b - a)).atan();
            data[a * n + b] = w;
            data[b * n + a] = w;
        }
    }
    WeightMatrix { t_len: n, data }
}

/// Element-wise median of the weight vectors in a window.
#[derive(Debug, Clone, PartialEq)]
pub struct MedianWeightVector<F> {
    pub right_index: usize,
    pub values: Vec<F>,
}

/// Median of rows `i - ws + 1 ..= i`, taken column by column.
pub fn median_weight_vector<F: Scalar>(m: &WeightMatrix<F>, i: usize, ws: WindowSize) -> Result<MedianWeightVector<F>> {
    let w = ws.get();
    if i < w || i > m.t_len {
        return invalid(format!("right index {i} outside {w}..={} for window {w}", m.t_len));
    }
    let mut buf = Vec::with_capacity(w);
    let mut values = Vec::with_capacity(m.t_len);
    fill_median_vector(m, i, w, &mut buf, &mut values);
    Ok(MedianWeightVector { right_index: i, values })
}

fn fill_median_vector<F: Scalar>(m: &WeightMatrix<F>, i: usize, w: usize, buf: &mut Vec<F>, out: &mut Vec<F>) {
    let n = m.t_len;
    out.clear();
    for k in 0..n {
        // Column k over rows (i-w)..i (0-based) is row k over those columns.
        let row = &m.data[k * n..(k + 1) * n];
        buf.clear();
        buf.extend_from_slice(&row[i - w..i]);
        out.push(median_in_place(buf));
    }
}

/// Windowed weighted-visibility-graph correlation track, aligned to right endpoints.
pub fn wvga_track<F: Scalar>(series: &BivariateSeries<F>, ws: WindowSize) -> Result<CorrelationTrack<F>> {
    let t_len = series.len();
    ws.check_fits(t_len)?;
    let w = ws.get();
    let m1 = weight_matrix(series.first());
    let m2 = weight_matrix(series.second());
    let values = (w..=t_len)
        .into_par_iter()
        .map_init(
            || {
                (
                    Vec::with_capacity(w),
                    Vec::with_capacity(t_len),
                    Vec::with_capacity(t_len),
                )
            },
            |(buf, v1, v2), i| {
                fill_median_vector(&m1, i, w, buf, v1);
                fill_median_vector(&m2, i, w, buf, v2);
                pearson(v1, v2)
            },
        )
        .collect::<Result<Vec<_>>>()?;
    CorrelationTrack::new(w, values)
}
