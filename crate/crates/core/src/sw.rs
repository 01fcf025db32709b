//! Sliding-window Pearson correlation.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;
use crate::series::{BivariateSeries, CorrelationTrack, WindowSize};
use crate::stats::pearson;

/// Pearson correlation over each window `[i - ws + 1, i]`, for right endpoints
/// `i = ws..=T`. Constant windows yield missing entries.
pub fn sw_track<F: Scalar>(series: &BivariateSeries<F>, ws: WindowSize) -> Result<CorrelationTrack<F>> {
    let t_len = series.len();
    ws.check_fits(t_len)?;
    let w = ws.get();
    if w < 2 {
        return invalid("sliding-window correlation needs a window of at least 2");
    }
    let (x, y) = (series.first().values(), series.second().values());
    let values = (w..=t_len)
        .into_par_iter()
        .map(|i| pearson(&x[i - w..i], &y[i - w..i]))
        .collect::<Result<Vec<_>>>()?;
    CorrelationTrack::new(w, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wiggle(n: usize) -> Vec<f64> {
        (0..n).map(|t| (t as f64 * 0.7).sin() + 0.01 * t as f64).collect()
    }

    #[test]
    fn identical_series_give_one() {
        let x = wiggle(60);
        let s = BivariateSeries::from_vecs(x.clone(), x).unwrap();
        let tr = sw_track(&s, WindowSize::DEFAULT).unwrap();
        assert_eq!(tr.start_index(), 15);
        assert_eq!(tr.len(), 60 - 15 + 1);
        for (_, v) in tr.iter() {
            assert!((v.unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn negated_series_give_minus_one() {
        let x = wiggle(60);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let s = BivariateSeries::from_vecs(x, neg).unwrap();
        for (_, v) in sw_track(&s, WindowSize::DEFAULT).unwrap().iter() {
            assert!((v.unwrap() + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_window_is_missing() {
        let mut x = wiggle(40);
        for v in &mut x[10..25] {
            *v = 3.0;
        }
        let y = wiggle(40).into_iter().map(|v| v * 2.0 + 1.0).collect();
        let s = BivariateSeries::from_vecs(x, y).unwrap();
        let tr = sw_track(&s, WindowSize::DEFAULT).unwrap();
        // only the window 11..=25 is entirely constant
        assert_eq!(tr.at(25), None);
        assert_eq!(tr.missing_count(), 1);
    }

    #[test]
    fn full_window_equals_full_pearson() {
        let x = wiggle(30);
        let y: Vec<f64> = (0..30).map(|t| ((t * t) % 7) as f64).collect();
        let s = BivariateSeries::from_vecs(x.clone(), y.clone()).unwrap();
        let tr = sw_track(&s, WindowSize::new(30).unwrap()).unwrap();
        assert_eq!(tr.len(), 1);
        assert_eq!(tr.at(30), pearson(&x, &y).unwrap());
    }

    #[test]
    fn rejects_oversized_and_unit_window() {
        let s = BivariateSeries::from_vecs(wiggle(10), wiggle(10)).unwrap();
        assert!(sw_track(&s, WindowSize::new(11).unwrap()).is_err());
        assert!(sw_track(&s, WindowSize::new(1).unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn positive_affine_and_negation(
            v in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 20..60),
            a in 0.1f64..10.0,
            b in -20.0f64..20.0,
        ) {
            let (x, y): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
            let ws = WindowSize::new(7).unwrap();
            let base = sw_track(&BivariateSeries::from_vecs(x.clone(), y.clone()).unwrap(), ws).unwrap();
            prop_assert_eq!(base.len(), x.len() - 7 + 1);

            let xs: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let moved = sw_track(&BivariateSeries::from_vecs(xs, y.clone()).unwrap(), ws).unwrap();
            for ((_, r0), (_, r1)) in base.iter().zip(moved.iter()) {
                if let (Some(r0), Some(r1)) = (r0, r1) {
                    prop_assert!((r0 - r1).abs() < 1e-10);
                }
            }

            let yn: Vec<f64> = y.iter().map(|v| -v).collect();
            let neg = sw_track(&BivariateSeries::from_vecs(x, yn).unwrap(), ws).unwrap();
            for ((_, r0), (_, r1)) in base.iter().zip(neg.iter()) {
                prop_assert_eq!(r0.map(|v| -v), r1);
            }
        }
    }
}
