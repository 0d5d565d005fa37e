//! Bounds on `λ₁` from power sums.
//!
//! For a trace-class DA operator with eigenvalues `1 = λ₀ > λ₁ ≥ λ₂ ≥ … ≥ 0`,
//! `u_k = (s_k − 1)^{1/k}` decreases to `λ₁` and
//! `l_k = (s_k − 1)/(s_{k−1} − 1)` increases to it, with `l_1 = 0`.
//! Intervals use the delta method with `s_k` and `s_{k−1}` estimated by
//! independent runs.

use serde::{Deserialize, Serialize};

use super::power_sum::PowerSumEstimate;
use crate::error::{Error, Result};
use crate::kernels::special::ndtri;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub k: usize,
    pub l_point: f64,
    pub u_point: f64,
    pub l_ci: (f64, f64),
    pub u_ci: (f64, f64),
    /// `(l_ci.0, u_ci.1)` truncated to `[0, 1]`.
    pub lambda1_interval: (f64, f64),
    pub alpha: f64,
    /// Set when an estimated power sum was at or below one, which leaves the
    /// bounds undefined; all bounds are then reported as zero.
    pub clamped: bool,
}

impl BoundReport {
    fn clamped(k: usize, alpha: f64) -> Self {
        Self {
            k,
            l_point: 0.0,
            u_point: 0.0,
            l_ci: (0.0, 0.0),
            u_ci: (0.0, 0.0),
            lambda1_interval: (0.0, 0.0),
            alpha,
            clamped: true,
        }
    }
}

/// Bounds from a mean and standard error for `s_k` and, for `k ≥ 2`, for `s_{k−1}`.
///
/// Each interval is two-sided at level `1 − α`; since `l_k ≤ λ₁ ≤ u_k`, only
/// the lower end of the `l_k` interval and the upper end of the `u_k`
/// interval can be violated, each with probability `α/2`, so the combined
/// interval for `λ₁` has coverage at least `1 − α`.
pub fn bounds_from_values(
    k: usize,
    s_k: (f64, f64),
    s_km1: Option<(f64, f64)>,
    alpha: f64,
) -> Result<BoundReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameters(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if k == 0 {
        return Err(Error::InvalidParameters("k must be >= 1".into()));
    }
    if (k == 1) != s_km1.is_none() {
        return Err(Error::MismatchedK {
            expected: k - 1,
            found: if k == 1 { 1 } else { 0 },
        });
    }
    let (mean_k, se_k) = s_k;
    if mean_k <= 1.0 || s_km1.is_some_and(|(m, _)| m <= 1.0) {
        return Ok(BoundReport::clamped(k, alpha));
    }
    let z = ndtri(1.0 - alpha / 2.0);
    let kf = k as f64;
    let excess = mean_k - 1.0;
    let u = excess.powf(1.0 / kf);
    let se_u = se_k * excess.powf(1.0 / kf - 1.0) / kf;
    let u_ci = (u - z * se_u, u + z * se_u);

    let (l, l_ci) = match s_km1 {
        None => (0.0, (0.0, 0.0)),
        Some((mean_prev, se_prev)) => {
            let excess_prev = mean_prev - 1.0;
            let l = excess / excess_prev;
            let rel = ((se_k / excess).powi(2) + (se_prev / excess_prev).powi(2)).sqrt();
            let se_l = l * rel;
            (l, (l - z * se_l, l + z * se_l))
        }
    };
    Ok(BoundReport {
        k,
        l_point: l,
        u_point: u,
        l_ci,
        u_ci,
        lambda1_interval: (l_ci.0.clamp(0.0, 1.0), u_ci.1.clamp(0.0, 1.0)),
        alpha,
        clamped: false,
    })
}

/// Bounds from estimated power sums; `est_km1` must be the `k − 1` estimate
/// when `k ≥ 2` and absent when `k = 1`.
pub fn bounds_from_power_sums(
    est_k: &PowerSumEstimate,
    est_km1: Option<&PowerSumEstimate>,
    alpha: f64,
) -> Result<BoundReport> {
    if let Some(prev) = est_km1 {
        if prev.k + 1 != est_k.k {
            return Err(Error::MismatchedK {
                expected: est_k.k.saturating_sub(1),
                found: prev.k,
            });
        }
    } else if est_k.k != 1 {
        return Err(Error::MismatchedK {
            expected: est_k.k - 1,
            found: 0,
        });
    }
    bounds_from_values(
        est_k.k,
        (est_k.mean, est_k.std_err),
        est_km1.map(|e| (e.mean, e.std_err)),
        alpha,
    )
}
