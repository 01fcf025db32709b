//! Simulation designs: mean-zero bivariate normal pairs with covariance
//! `[[2, sqrt(6) p(t)], [sqrt(6) p(t), 3]]` at time `t`, and clipped bivariate
//! Cauchy pairs with unit-scale shape matrix `[[1, p(t)], [p(t), 1]]`, the
//! usual parameterization of the bivariate Cauchy by its correlation
//! parameter. The Cauchy scale matters because clipping at +/-50 and the
//! arctan weights are not scale invariant.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`. Each time
//! point consumes two standard normals (and, for Cauchy, one chi-square(1)
//! draw) in that order.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;
use crate::series::BivariateSeries;

pub const CAUCHY_CLIP: f64 = 50.0;
pub const CHOLESKY_JITTER: f64 = 1e-12;
/// Center of the Gaussian-kernel profiles.
pub const GAUSS_CENTER: f64 = 250.0;
pub const MIN_SIM_LEN: usize = 30;

/// True correlation path `p(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "k", rename_all = "lowercase")]
pub enum CorrelationProfile {
    Zero,
    /// `sin(t / delta)`, `delta = 1024 / 2^k`.
    Sine(u32),
    /// `exp(-(t - 250)^2 / (2 (15 k)^2))`, peak 1 at `t = 250`.
    Gauss(u32),
}

impl CorrelationProfile {
    pub fn eval(&self, t: usize) -> f64 {
        profile_eval(*self, t)
    }

    /// `p(1..=t_len)`.
    pub fn sample(&self, t_len: usize) -> Vec<f64> {
        (1..=t_len).map(|t| self.eval(t)).collect()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }
}

pub fn profile_eval(profile: CorrelationProfile, t: usize) -> f64 {
    let t = t as f64;
    match profile {
        CorrelationProfile::Zero => 0.0,
        CorrelationProfile::Sine(k) => {
            let delta = 1024.0 / 2f64.powi(k as i32);
            (t / delta).sin()
        }
        CorrelationProfile::Gauss(k) => {
            let sd = 15.0 * k as f64;
            let d = t - GAUSS_CENTER;
            (-(d * d) / (2.0 * sd * sd)).exp()
        }
    }
}

/// Named designs: constant zero, two sine speeds, two kernel widths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Design {
    D1,
    D2a,
    D2b,
    D3a,
    D3b,
}

impl Design {
    pub const ALL: [Design; 5] = [Design::D1, Design::D2a, Design::D2b, Design::D3a, Design::D3b];

    pub fn profile(self) -> CorrelationProfile {
        match self {
            Design::D1 => CorrelationProfile::Zero,
            Design::D2a => CorrelationProfile::Sine(3),
            Design::D2b => CorrelationProfile::Sine(4),
            Design::D3a => CorrelationProfile::Gauss(3),
            Design::D3b => CorrelationProfile::Gauss(4),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Design::D1 => "d1",
            Design::D2a => "d2a",
            Design::D2b => "d2b",
            Design::D3a => "d3a",
            Design::D3b => "d3b",
        }
    }
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Design {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Design::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown design '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dist {
    Normal,
    Cauchy,
}

impl Dist {
    pub fn name(self) -> &'static str {
        match self {
            Dist::Normal => "normal",
            Dist::Cauchy => "cauchy",
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "normal" => Ok(Dist::Normal),
            "cauchy" => Ok(Dist::Cauchy),
            _ => Err(Error::InvalidInput(format!("unknown distribution '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimDesign {
    pub profile: CorrelationProfile,
    pub dist: Dist,
    pub t_len: usize,
    pub clip: f64,
    pub seed: u64,
}

impl SimDesign {
    pub fn new(profile: CorrelationProfile, dist: Dist, t_len: usize, seed: u64) -> Result<Self> {
        if t_len < MIN_SIM_LEN {
            return invalid(format!("simulated length must be at least {MIN_SIM_LEN}, got {t_len}"));
        }
        Ok(Self {
            profile,
            dist,
            t_len,
            clip: CAUCHY_CLIP,
            seed,
        })
    }

    pub fn named(design: Design, dist: Dist, t_len: usize, seed: u64) -> Result<Self> {
        Self::new(design.profile(), dist, t_len, seed)
    }

    /// Same design with the seed used for Monte Carlo repetition `rep`.
    pub fn for_rep(&self, rep: u64) -> Self {
        Self {
            seed: self.seed.wrapping_add(rep),
            ..*self
        }
    }

    pub fn generate<F: Scalar>(&self) -> Result<BivariateSeries<F>> {
        match self.dist {
            Dist::Normal => gen_normal_pair(self),
            Dist::Cauchy => gen_cauchy_pair(self),
        }
    }
}

/// Covariance matrix for correlation parameter `p`.
pub fn cov_at(p: f64) -> Result<[[f64; 2]; 2]> {
    if !(p.abs() <= 1.0) {
        return invalid(format!("correlation parameter {p} outside [-1, 1]"));
    }
    let off = 6f64.sqrt() * p;
    Ok([[2.0, off], [off, 3.0]])
}

/// Unit-scale shape matrix of the bivariate Cauchy draws.
pub fn cauchy_shape_at(p: f64) -> Result<[[f64; 2]; 2]> {
    if !(p.abs() <= 1.0) {
        return invalid(format!("correlation parameter {p} outside [-1, 1]"));
    }
    Ok([[1.0, p], [p, 1.0]])
}

/// Matrix whose Cholesky factor colours the standard normal draws.
pub fn shape_at(dist: Dist, p: f64) -> Result<[[f64; 2]; 2]> {
    match dist {
        Dist::Normal => cov_at(p),
        Dist::Cauchy => cauchy_shape_at(p),
    }
}

/// Lower Cholesky factor `(l11, l21, l22)`; jitters the diagonal at `|p| = 1`.
fn cholesky(dist: Dist, p: f64) -> Result<(f64, f64, f64)> {
    let mut c = shape_at(dist, p)?;
    if p.abs() == 1.0 {
        c[0][0] += CHOLESKY_JITTER;
        c[1][1] += CHOLESKY_JITTER;
    }
    let l11 = c[0][0].sqrt();
    let l21 = c[1][0] / l11;
    let l22 = (c[1][1] - l21 * l21).max(0.0).sqrt();
    Ok((l11, l21, l22))
}

fn draw_pairs<F: Scalar>(
    design: &SimDesign,
    mut per_point: impl FnMut(&mut ChaCha8Rng, f64, f64) -> (f64, f64),
) -> Result<BivariateSeries<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(design.seed);
    let mut x1 = Vec::with_capacity(design.t_len);
    let mut x2 = Vec::with_capacity(design.t_len);
    for t in 1..=design.t_len {
        let (l11, l21, l22) = cholesky(design.dist, design.profile.eval(t))?;
        let e1: f64 = StandardNormal.sample(&mut rng);
        let e2: f64 = StandardNormal.sample(&mut rng);
        let (a, b) = per_point(&mut rng, l11 * e1, l21 * e1 + l22 * e2);
        x1.push(F::lit(a));
        x2.push(F::lit(b));
    }
    BivariateSeries::from_vecs(x1, x2)
}

/// Independent mean-zero normal draws with covariance `cov_at(p(t))`.
pub fn gen_normal_pair<F: Scalar>(design: &SimDesign) -> Result<BivariateSeries<F>> {
    if design.dist != Dist::Normal {
        return invalid("design is not a normal design");
    }
    draw_pairs(design, |_, a, b| (a, b))
}

/// Bivariate Cauchy (multivariate t, 1 df) with shape `[[1, p(t)], [p(t), 1]]`,
/// clipped per coordinate to `[-clip, clip]`.
pub fn gen_cauchy_pair<F: Scalar>(design: &SimDesign) -> Result<BivariateSeries<F>> {
    if design.dist != Dist::Cauchy {
        return invalid("design is not a Cauchy design");
    }
    if !(design.clip > 0.0) {
        return invalid("clip must be positive");
    }
    let chi = ChiSquared::<f64>::new(1.0).map_err(|e| Error::Numerical(e.to_string()))?;
    let clip = design.clip;
    draw_pairs(design, |rng, a, b| {
        let scale = chi.sample(rng).sqrt();
        (clip_value(a / scale, clip), clip_value(b / scale, clip))
    })
}

pub fn clip_value(v: f64, clip: f64) -> f64 {
    if v.is_nan() {
        // 0/0 only when both the normal and the chi-square draw are exactly zero
        0.0
    } else {
        v.clamp(-clip, clip)
    }
}
