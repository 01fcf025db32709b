//! Two-stage DCC(1,1) over per-series GARCH(1,1).
//!
//! Stage one fits each series' GARCH(1,1) and standardizes it. Stage two runs
//! the pseudo-correlation recursion
//! `Q[t] = (1 - a - b) * S + a * z[t-1] z[t-1]' + b * Q[t-1]`, with `Q[1] = S`
//! and `S` the sample correlation of the standardized residuals, and
//! maximizes the bivariate Gaussian quasi-likelihood of the implied
//! correlations `Q12 / sqrt(Q11 * Q22)` over `a, b >= 0`, `a + b < 1`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::garch::{bounded_pair, bounded_pair_logits, garch_fit, GarchParams, ALPHA_START, BETA_START, MIN_FIT_LEN};
use crate::optim::{self, minimize};
use crate::scalar::Scalar;
use crate::series::{BivariateSeries, CorrelationTrack};
use crate::stats::pearson;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DccParams<F> {
    pub a: F,
    pub b: F,
    /// Unconditional correlation matrix of the standardized residuals.
    pub s_bar: [[F; 2]; 2],
    pub converged: bool,
    pub loglik: F,
}

impl<F: Scalar> DccParams<F> {
    pub fn s_bar_offdiag(&self) -> F {
        self.s_bar[0][1]
    }

    pub fn is_admissible(&self) -> bool {
        self.a >= F::zero() && self.b >= F::zero() && self.a + self.b < F::one()
    }
}

fn corr_matrix<F: Scalar>(r: F) -> [[F; 2]; 2] {
    [[F::one(), r], [r, F::one()]]
}

/// Symmetric 2x2 pseudo-correlation matrix `Q[t]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QMatrix<F> {
    pub q11: F,
    pub q12: F,
    pub q22: F,
}

impl<F: Scalar> QMatrix<F> {
    pub fn correlation(&self) -> F {
        let r = self.q12 / (self.q11 * self.q22).sqrt();
        r.max(-F::one()).min(F::one())
    }

    /// Both leading principal minors positive.
    pub fn is_positive_definite(&self) -> bool {
        self.q11 > F::zero() && self.q11 * self.q22 - self.q12 * self.q12 > F::zero()
    }
}

/// Pseudo-correlation path `Q[1..=T]`.
pub fn dcc_q_path<F: Scalar>(a: F, b: F, s_bar12: F, z1: &[F], z2: &[F]) -> Result<Vec<QMatrix<F>>> {
    if z1.len() != z2.len() {
        return invalid(format!("residual lengths differ: {} vs {}", z1.len(), z2.len()));
    }
    if z1.is_empty() {
        return invalid("empty residuals");
    }
    if a < F::zero() || b < F::zero() || !(a + b < F::one()) {
        return invalid(format!("DCC parameters need a, b >= 0, a + b < 1 (got {a}, {b})"));
    }
    let c = F::one() - a - b;
    let mut q = QMatrix {
        q11: F::one(),
        q12: s_bar12,
        q22: F::one(),
    };
    let mut out = Vec::with_capacity(z1.len());
    out.push(q);
    for t in 1..z1.len() {
        let (u, v) = (z1[t - 1], z2[t - 1]);
        q = QMatrix {
            q11: c + a * u * u + b * q.q11,
            q12: c * s_bar12 + a * u * v + b * q.q12,
            q22: c + a * v * v + b * q.q22,
        };
        out.push(q);
    }
    Ok(out)
}

/// Conditional correlations implied by the recursion.
pub fn dcc_filter<F: Scalar>(a: F, b: F, s_bar12: F, z1: &[F], z2: &[F]) -> Result<Vec<F>> {
    Ok(dcc_q_path(a, b, s_bar12, z1, z2)?
        .iter()
        .map(QMatrix::correlation)
        .collect())
}

/// Stage-two objective
/// `-1/2 * sum(log(1 - r^2) + (z1^2 + z2^2 - 2 r z1 z2) / (1 - r^2))`.
pub fn dcc_loglik<F: Scalar>(a: F, b: F, s_bar12: F, z1: &[F], z2: &[F]) -> Result<F> {
    let rho = dcc_filter(a, b, s_bar12, z1, z2)?;
    let mut acc = F::zero();
    for ((&r, &u), &v) in rho.iter().zip(z1).zip(z2) {
        let d = F::one() - r * r;
        if !(d > F::zero()) {
            return Err(Error::Numerical(format!("degenerate correlation {r}")));
        }
        acc = acc + d.ln() + (u * u + v * v - F::lit(2.0) * r * u * v) / d;
    }
    let ll = -acc / F::lit(2.0);
    if !ll.is_finite() {
        return Err(Error::Numerical("non-finite DCC likelihood".into()));
    }
    Ok(ll)
}

/// Stage two: fit `(a, b)` on standardized residuals.
pub fn dcc_fit<F: Scalar>(z1: &[F], z2: &[F]) -> Result<DccParams<F>> {
    let s12 = match pearson(z1, z2)? {
        Some(r) => r,
        None => {
            return Ok(DccParams {
                a: F::zero(),
                b: F::zero(),
                s_bar: corr_matrix(F::zero()),
                converged: false,
                loglik: F::neg_infinity(),
            })
        }
    };
    let degenerate = DccParams {
        a: F::zero(),
        b: F::zero(),
        s_bar: corr_matrix(s12),
        converged: false,
        loglik: F::neg_infinity(),
    };
    if !(s12.abs() < F::one()) {
        return Ok(degenerate);
    }

    let start = bounded_pair_logits(F::lit(ALPHA_START), F::lit(BETA_START));
    let objective = |raw: &[F]| {
        let (a, b) = bounded_pair(raw);
        match dcc_loglik(a, b, s12, z1, z2) {
            Ok(ll) => -ll,
            Err(_) => F::infinity(),
        }
    };
    if !objective(&start).is_finite() {
        return Ok(degenerate);
    }
    let opt = minimize(objective, &start, F::lit(optim::DEFAULT_TOL), optim::DEFAULT_MAX_ITER)?;
    let (a, b) = bounded_pair(&opt.x_min);
    let loglik = dcc_loglik(a, b, s12, z1, z2).unwrap_or(F::neg_infinity());
    let mut params = DccParams {
        a,
        b,
        s_bar: corr_matrix(s12),
        converged: false,
        loglik,
    };
    params.converged = opt.converged && params.is_admissible() && loglik.is_finite();
    Ok(params)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FitStatus {
    Converged,
    DidNotConverge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DccFitReport<F> {
    pub garch: [GarchParams<F>; 2],
    /// Absent when stage one failed.
    pub dcc: Option<DccParams<F>>,
    /// Present only on convergence; starts at `t = 1`.
    pub track: Option<CorrelationTrack<F>>,
    pub status: FitStatus,
}

impl<F: Scalar> DccFitReport<F> {
    pub fn converged(&self) -> bool {
        self.status == FitStatus::Converged
    }
}

/// Full two-stage fit and the filtered correlation track.
pub fn dcc_track<F: Scalar>(series: &BivariateSeries<F>) -> Result<DccFitReport<F>> {
    if series.len() < MIN_FIT_LEN {
        return invalid(format!("DCC needs at least {MIN_FIT_LEN} points, got {}", series.len()));
    }
    let g1 = garch_fit(series.first())?;
    let g2 = garch_fit(series.second())?;
    let garch = [g1.params, g2.params];
    if !(g1.params.converged && g2.params.converged) {
        return Ok(DccFitReport {
            garch,
            dcc: None,
            track: None,
            status: FitStatus::DidNotConverge,
        });
    }
    let dcc = dcc_fit(&g1.residuals, &g2.residuals)?;
    if !dcc.converged {
        return Ok(DccFitReport {
            garch,
            dcc: Some(dcc),
            track: None,
            status: FitStatus::DidNotConverge,
        });
    }
    let rho = dcc_filter(dcc.a, dcc.b, dcc.s_bar_offdiag(), &g1.residuals, &g2.residuals)?;
    let track = CorrelationTrack::new(1, rho.into_iter().map(Some).collect())?;
    Ok(DccFitReport {
        garch,
        dcc: Some(dcc),
        track: Some(track),
        status: FitStatus::Converged,
    })
}
