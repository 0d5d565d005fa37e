//! One-sided truncated normal.
//!
//! Sampling uses inversion of the CDF while the truncation point lies less
//! than [`TAIL_SWITCH`] standard deviations above the mean, and Robert's
//! translated-exponential rejection sampler beyond that.

use rand_distr::{Distribution, Exp1};

use super::special::{log_ndtr, log_phi, ndtr, ndtri};
use crate::rng::RandomStream;

/// Standardized truncation point beyond which exponential rejection is used.
pub const TAIL_SWITCH: f64 = 4.0;

/// Which half-line the variable is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `x > 0`
    Positive,
    /// `x < 0`
    Negative,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Positive => 1.0,
            Side::Negative => -1.0,
        }
    }

    pub fn contains(self, x: f64) -> bool {
        match self {
            Side::Positive => x > 0.0,
            Side::Negative => x < 0.0,
        }
    }
}

/// Draw `Z ~ N(0, 1)` conditioned on `Z > a`.
pub fn sample_std_above(a: f64, rng: &mut RandomStream) -> f64 {
    if a < TAIL_SWITCH {
        let upper = ndtr(-a);
        let z = -ndtri(rng.uniform_open() * upper);
        if z > a {
            z
        } else {
            a + f64::EPSILON * a.abs().max(1.0)
        }
    } else {
        let rate = 0.5 * (a + (a * a + 4.0).sqrt());
        loop {
            let e: f64 = Exp1.sample(rng);
            let z = a + e / rate;
            let d = z - rate;
            if rng.uniform_open().ln() <= -0.5 * d * d {
                return z;
            }
        }
    }
}

/// Draw from `N(mean, sd²)` restricted to `side`.
pub fn sample(mean: f64, sd: f64, side: Side, rng: &mut RandomStream) -> f64 {
    let s = side.sign();
    // Reflect so the restriction is always "above zero".
    let m = s * mean;
    let z = sample_std_above(-m / sd, rng);
    let x = (m + sd * z).max(f64::MIN_POSITIVE);
    s * x
}

/// Normalized log-density; `-inf` outside the support.
pub fn log_pdf(x: f64, mean: f64, sd: f64, side: Side) -> f64 {
    if !side.contains(x) {
        return f64::NEG_INFINITY;
    }
    let s = side.sign();
    log_phi((x - mean) / sd) - sd.ln() - log_ndtr(s * mean / sd)
}
