//! Nelder-Mead simplex minimizer for small unconstrained problems.
//!
//! Non-finite objective values are treated as `+inf`, so a penalty can be
//! signalled by returning `NaN` or `inf` away from the start point.

use std::cmp::Ordering;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 2000;

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
const STEP_FLOOR: f64 = 0.05;
const STEP_REL: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimResult<F> {
    pub x_min: Vec<F>,
    pub f_min: F,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimize `f` from `x0`. Stops once the spread of function values across the
/// simplex drops below `tol` and a restart from the best vertex confirms it,
/// or after `max_iter` iterations (not converged).
pub fn minimize<F, O>(mut f: O, x0: &[F], tol: F, max_iter: usize) -> Result<OptimResult<F>>
where
    F: Scalar,
    O: FnMut(&[F]) -> F,
{
    let n = x0.len();
    if n == 0 {
        return invalid("optimizer needs at least one parameter");
    }
    if !(tol > F::zero()) {
        return invalid("tolerance must be positive");
    }
    let f0 = f(x0);
    if !f0.is_finite() {
        return invalid(format!("objective is not finite at the start point ({f0})"));
    }

    let mut eval = |x: &[F]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            F::infinity()
        }
    };

    let mut simplex = initial_simplex(&mut eval, x0, f0);
    let by_value = |a: &(Vec<F>, F), b: &(Vec<F>, F)| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal);
    let mut iterations = 0;
    let mut converged = false;
    let mut confirmed_best: Option<F> = None;

    loop {
        // Stable sort keeps the incumbent ahead of ties.
        simplex.sort_by(by_value);
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if worst - best < tol {
            // A collapsed spread can also come from a simplex straddling the
            // minimum symmetrically; accept only once a fresh simplex around
            // the best point fails to improve it by tol.
            if confirmed_best.is_some_and(|prev| prev - best < tol) {
                converged = true;
                break;
            }
            confirmed_best = Some(best);
            if iterations >= max_iter {
                break;
            }
            let (bx, bf) = simplex.swap_remove(0);
            simplex = initial_simplex(&mut eval, &bx, bf);
            continue;
        }
        if iterations >= max_iter {
            break;
        }
        iterations += 1;

        let mut centroid = vec![F::zero(); n];
        for (x, _) in &simplex[..n] {
            for (c, &xi) in centroid.iter_mut().zip(x) {
                *c = *c + xi;
            }
        }
        let inv_n = F::one() / F::count(n);
        for c in &mut centroid {
            *c = *c * inv_n;
        }

        let worst_x = simplex[n].0.clone();
        let along = |coef: F| -> Vec<F> {
            centroid
                .iter()
                .zip(&worst_x)
                .map(|(&c, &w)| c + coef * (c - w))
                .collect()
        };

        let xr = along(F::lit(REFLECT));
        let fr = eval(&xr);
        let second_worst = simplex[n - 1].1;

        if fr < best {
            let xe = along(F::lit(REFLECT * EXPAND));
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < second_worst {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc, accept) = if fr < worst {
                let xc = along(F::lit(REFLECT * CONTRACT));
                let fc = eval(&xc);
                let ok = fc <= fr;
                (xc, fc, ok)
            } else {
                let xc = along(-F::lit(CONTRACT));
                let fc = eval(&xc);
                let ok = fc < worst;
                (xc, fc, ok)
            };
            if accept {
                simplex[n] = (xc, fc);
            } else {
                let anchor = simplex[0].0.clone();
                for (x, fx) in simplex.iter_mut().skip(1) {
                    for (xi, &ai) in x.iter_mut().zip(&anchor) {
                        *xi = ai + F::lit(SHRINK) * (*xi - ai);
                    }
                    *fx = eval(x);
                }
            }
        }
    }

    simplex.sort_by(by_value);
    let (x_min, f_min) = simplex.swap_remove(0);
    Ok(OptimResult {
        x_min,
        f_min,
        iterations,
        converged,
    })
}

fn initial_simplex<F: Scalar>(eval: &mut impl FnMut(&[F]) -> F, x0: &[F], f0: F) -> Vec<(Vec<F>, F)> {
    let mut simplex = Vec::with_capacity(x0.len() + 1);
    simplex.push((x0.to_vec(), f0));
    for k in 0..x0.len() {
        let mut x = x0.to_vec();
        let step = F::lit(STEP_FLOOR).max(F::lit(STEP_REL) * x0[k].abs());
        x[k] = x[k] + step;
        let fx = eval(&x);
        simplex.push((x, fx));
    }
    simplex
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    #[test]
    fn quadratic_1d() {
        let r = minimize(|x: &[f64]| (x[0] - 2.0).powi(2), &[0.0], 1e-14, DEFAULT_MAX_ITER).unwrap();
        assert!(r.converged);
        assert!((r.x_min[0] - 2.0).abs() < 1e-6, "{:?}", r);
    }

    #[test]
    fn rosenbrock_2d() {
        let r = minimize(rosenbrock, &[-1.2, 1.0], 1e-16, 10_000).unwrap();
        assert!(r.converged, "{r:?}");
        assert!(
            (r.x_min[0] - 1.0).abs() < 1e-4 && (r.x_min[1] - 1.0).abs() < 1e-4,
            "{r:?}"
        );
    }

    #[test]
    fn iteration_cap_reports_failure() {
        let r = minimize(rosenbrock, &[-1.2, 1.0], DEFAULT_TOL, 1).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn f_min_matches_objective_and_never_worse() {
        let f = |x: &[f64]| (x[0] - 0.3).abs() + (x[1] + 2.0).powi(2) + x[2].cosh();
        let x0 = [1.0, 1.0, 1.0];
        let r = minimize(f, &x0, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(r.f_min, f(&r.x_min));
        assert!(r.f_min <= f(&x0));
    }

    #[test]
    fn deterministic() {
        let a = minimize(rosenbrock, &[-1.2, 1.0], DEFAULT_TOL, 500).unwrap();
        let b = minimize(rosenbrock, &[-1.2, 1.0], DEFAULT_TOL, 500).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn penalties_and_bad_start() {
        // infeasible half-line returns NaN
        let f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 1.0).powi(2) };
        let r = minimize(f, &[0.5], 1e-14, DEFAULT_MAX_ITER).unwrap();
        assert!((r.x_min[0] - 1.0).abs() < 1e-5);
        assert!(minimize(|_: &[f64]| f64::INFINITY, &[0.0], DEFAULT_TOL, 10).is_err());
        assert!(minimize(|x: &[f64]| x[0], &[], DEFAULT_TOL, 10).is_err());
    }

    #[test]
    fn works_in_f32() {
        let r = minimize(|x: &[f32]| (x[0] + 1.5).powi(2), &[0.0f32], 1e-10, DEFAULT_MAX_ITER).unwrap();
        assert!((r.x_min[0] + 1.5).abs() < 1e-3);
    }
}
