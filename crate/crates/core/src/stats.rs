//! Pearson correlation and the sample median.

use std::cmp::Ordering;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Sample Pearson correlation of two equal-length samples.
///
/// Returns `Ok(None)` when either sample is constant. The result is clamped
/// to `[-1, 1]`.
pub fn pearson<F: Scalar>(x: &[F], y: &[F]) -> Result<Option<F>> {
    if x.len() != y.len() {
        return invalid(format!("length mismatch: {} vs {}", x.len(), y.len()));
    }
    if x.len() < 2 {
        return invalid("pearson needs at least 2 points");
    }
    if is_constant(x) || is_constant(y) {
        return Ok(None);
    }
    let n = F::count(x.len());
    let mx = x.iter().copied().sum::<F>() / n;
    let my = y.iter().copied().sum::<F>() / n;
    let (mut sxy, mut sxx, mut syy) = (F::zero(), F::zero(), F::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy = sxy + da * db;
        sxx = sxx + da * da;
        syy = syy + db * db;
    }
    if sxx <= F::zero() || syy <= F::zero() {
        return Ok(None);
    }
    let prod = sxx * syy;
    let denom = if prod.is_finite() {
        prod.sqrt()
    } else {
        sxx.sqrt() * syy.sqrt()
    };
    let r = sxy / denom;
    if !r.is_finite() {
        return Ok(None);
    }
    Ok(Some(r.max(-F::one()).min(F::one())))
}

fn is_constant<F: Scalar>(v: &[F]) -> bool {
    v.iter().all(|&a| a == v[0])
}

/// Sample median; even lengths average the two middle order statistics.
pub fn median<F: Scalar>(v: &[F]) -> Result<F> {
    if v.is_empty() {
        return invalid("median of empty sample");
    }
    let mut buf = v.to_vec();
    Ok(median_in_place(&mut buf))
}

/// Median of a non-empty buffer, reordering it. Callers guarantee non-NaN input.
pub(crate) fn median_in_place<F: Scalar>(buf: &mut [F]) -> F {
    debug_assert!(!buf.is_empty());
    let n = buf.len();
    let mid = n / 2;
    let cmp = |a: &F, b: &F| a.partial_cmp(b).unwrap_or(Ordering::Equal);
    let (lower, upper_mid, _) = buf.select_nth_unstable_by(mid, cmp);
    let upper_mid = *upper_mid;
    if n % 2 == 1 {
        upper_mid
    } else {
        let lower_mid = lower
            .iter()
            .copied()
            .fold(F::neg_infinity(), |acc, v| if v > acc { v } else { acc });
        (lower_mid + upper_mid) / F::lit(2.0)
    }
}
