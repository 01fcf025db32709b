//! Univariate GARCH(1,1) with Gaussian quasi-likelihood.
//!
//! The variance recursion is `s2[t] = omega + alpha * e[t-1]^2 + beta * s2[t-1]`.
//! The pre-sample shock and variance are both backcast to the second moment
//! of the residuals, so the first filtered variance is
//! `omega + (alpha + beta) * mean(e^2)`.

use crate::error::{invalid, Error, Result};
use crate::optim::{self, minimize};
use crate::scalar::Scalar;
use crate::series::TimeSeries;

/// Cap on `alpha + beta` (and `a + b` for the correlation stage) imposed by the
/// parameter map.
pub const PERSISTENCE_CAP: f64 = 0.999;
pub const MIN_FIT_LEN: usize = 30;

pub(crate) const ALPHA_START: f64 = 0.05;
pub(crate) const BETA_START: f64 = 0.90;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GarchParams<F> {
    pub omega: F,
    pub alpha: F,
    pub beta: F,
    pub converged: bool,
    pub loglik: F,
}

impl<F: Scalar> GarchParams<F> {
    /// Unfitted parameters; `converged` is false and `loglik` is `-inf`.
    pub fn new(omega: F, alpha: F, beta: F) -> Result<Self> {
        let p = Self {
            omega,
            alpha,
            beta,
            converged: false,
            loglik: F::neg_infinity(),
        };
        if !p.is_admissible() {
            return invalid(format!(
                "GARCH parameters need omega > 0, alpha, beta >= 0, alpha + beta < 1 \
                 (got {omega}, {alpha}, {beta})"
            ));
        }
        Ok(p)
    }

    pub fn is_admissible(&self) -> bool {
        self.omega > F::zero()
            && self.omega.is_finite()
            && self.alpha >= F::zero()
            && self.beta >= F::zero()
            && self.alpha + self.beta < F::one()
    }

    /// Long-run variance `omega / (1 - alpha - beta)`.
    pub fn unconditional_variance(&self) -> F {
        self.omega / (F::one() - self.alpha - self.beta)
    }
}

fn second_moment<F: Scalar>(eps: &[F]) -> F {
    eps.iter().map(|&e| e * e).sum::<F>() / F::count(eps.len())
}

/// Conditional variances for residuals `eps`.
pub fn garch_filter<F: Scalar>(params: &GarchParams<F>, eps: &[F]) -> Result<Vec<F>> {
    if eps.len() < 2 {
        return invalid("GARCH filter needs at least 2 residuals");
    }
    let backcast = second_moment(eps);
    let (w, a, b) = (params.omega, params.alpha, params.beta);
    let mut out = Vec::with_capacity(eps.len());
    let mut prev_sq = backcast;
    let mut prev_var = backcast;
    for &e in eps {
        let v = w + a * prev_sq + b * prev_var;
        if !v.is_finite() {
            return Err(Error::Numerical(format!("GARCH variance became {v}")));
        }
        out.push(v);
        prev_sq = e * e;
        prev_var = v;
    }
    Ok(out)
}

/// `-1/2 * sum(log s2[t] + e[t]^2 / s2[t])`, additive constant dropped.
pub fn garch_loglik<F: Scalar>(params: &GarchParams<F>, eps: &[F]) -> Result<F> {
    let var = garch_filter(params, eps)?;
    loglik_from_variances(&var, eps)
}

fn loglik_from_variances<F: Scalar>(var: &[F], eps: &[F]) -> Result<F> {
    let mut acc = F::zero();
    for (&v, &e) in var.iter().zip(eps) {
        if !(v > F::zero()) {
            return Err(Error::Numerical(format!("non-positive conditional variance {v}")));
        }
        acc = acc + v.ln() + e * e / v;
    }
    Ok(-acc / F::lit(2.0))
}

/// Smooth map from unconstrained reals to a pair `(p, q)` with `p, q > 0` and
/// `p + q < PERSISTENCE_CAP`: a softmax over three logits, scaled by the cap.
pub(crate) fn bounded_pair<F: Scalar>(logits: &[F]) -> (F, F) {
    let m = logits[0].max(logits[1]).max(logits[2]);
    let e: Vec<F> = logits[..3].iter().map(|&u| (u - m).exp()).collect();
    let total = e[0] + e[1] + e[2];
    let cap = F::lit(PERSISTENCE_CAP);
    (cap * e[0] / total, cap * e[1] / total)
}

pub(crate) fn bounded_pair_logits<F: Scalar>(p: F, q: F) -> [F; 3] {
    let cap = F::lit(PERSISTENCE_CAP);
    let (sp, sq) = (p / cap, q / cap);
    [sp.ln(), sq.ln(), (F::one() - sp - sq).ln()]
}

fn params_from_raw<F: Scalar>(raw: &[F]) -> GarchParams<F> {
    let (alpha, beta) = bounded_pair(&raw[1..4]);
    GarchParams {
        omega: raw[0].exp(),
        alpha,
        beta,
        converged: false,
        loglik: F::neg_infinity(),
    }
}

/// Outcome of a stage-one fit.
#[derive(Debug, Clone, PartialEq)]
pub struct GarchFit<F> {
    pub params: GarchParams<F>,
    /// Standardized residuals `e[t] / sqrt(s2[t])` of the demeaned series.
    pub residuals: Vec<F>,
    /// Quasi-likelihood at the optimizer's starting point.
    pub initial_loglik: F,
    pub iterations: usize,
}

/// Demean `x` and maximize the GARCH(1,1) quasi-likelihood.
///
/// Failure to converge is reported through `params.converged`, not as an error.
pub fn garch_fit<F: Scalar>(x: &TimeSeries<F>) -> Result<GarchFit<F>> {
    let t_len = x.len();
    if t_len < MIN_FIT_LEN {
        return invalid(format!("GARCH fit needs at least {MIN_FIT_LEN} points, got {t_len}"));
    }
    let v = x.values();
    let mean = v.iter().copied().sum::<F>() / F::count(t_len);
    let eps: Vec<F> = v.iter().map(|&a| a - mean).collect();
    let s2 = second_moment(&eps);

    if !(s2 > F::zero()) || v.iter().all(|&a| a == v[0]) {
        return Ok(GarchFit {
            params: GarchParams {
                omega: F::min_positive_value(),
                alpha: F::zero(),
                beta: F::zero(),
                converged: false,
                loglik: F::neg_infinity(),
            },
            residuals: vec![F::zero(); t_len],
            initial_loglik: F::neg_infinity(),
            iterations: 0,
        });
    }

    let (a0, b0) = (F::lit(ALPHA_START), F::lit(BETA_START));
    let omega0 = (F::one() - a0 - b0) * s2;
    let logits = bounded_pair_logits(a0, b0);
    let start = [omega0.ln(), logits[0], logits[1], logits[2]];

    let objective = |raw: &[F]| {
        let p = params_from_raw(raw);
        match garch_loglik(&p, &eps) {
            Ok(ll) => -ll,
            Err(_) => F::infinity(),
        }
    };
    let initial_loglik = -objective(&start);
    let opt = minimize(objective, &start, F::lit(optim::DEFAULT_TOL), optim::DEFAULT_MAX_ITER)?;

    let mut params = params_from_raw(&opt.x_min);
    let var = garch_filter(&params, &eps)?;
    let loglik = loglik_from_variances(&var, &eps)?;
    params.loglik = loglik;
    params.converged = opt.converged && params.is_admissible() && loglik.is_finite();
    let residuals = eps.iter().zip(&var).map(|(&e, &s)| e / s.sqrt()).collect();

    Ok(GarchFit {
        params,
        residuals,
        initial_loglik,
        iterations: opt.iterations,
    })
}
