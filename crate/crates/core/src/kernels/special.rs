//! Normal-distribution special functions with tail-accurate logs.

use std::f64::consts::{PI, SQRT_2};

use statrs::function::erf::{erfc, erfc_inv};

pub use statrs::function::gamma::ln_gamma;

/// `0.5 * ln(2π)`
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard normal log-density.
pub fn log_phi(x: f64) -> f64 {
    -0.5 * x * x - LN_SQRT_2PI
}

/// Standard normal CDF.
pub fn ndtr(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// `ln Φ(x)`, accurate far into the lower tail.
pub fn log_ndtr(x: f64) -> f64 {
    if x > 6.0 {
        // Φ(x) = 1 - Φ(-x), Φ(-x) < 1e-9
        -ndtr(-x)
    } else if x > -20.0 {
        ndtr(x).ln()
    } else {
        // Asymptotic expansion of the Mills ratio.
        let x2 = x * x;
        let inv = 1.0 / x2;
        let series = 1.0 - inv + 3.0 * inv * inv - 15.0 * inv * inv * inv + 105.0 * inv.powi(4);
        -0.5 * x2 - (-x).ln() - 0.5 * (2.0 * PI).ln() + series.ln()
    }
}

/// Inverse of the standard normal CDF.
pub fn ndtri(p: f64) -> f64 {
    -SQRT_2 * erfc_inv(2.0 * p)
}

/// Inverse Mills ratio `φ(x) / Φ(x)`, stable for very negative `x`.
pub fn inv_mills(x: f64) -> f64 {
    (log_phi(x) - log_ndtr(x)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_phi_at_zero() {
        assert!((log_phi(0.0) + 0.918_938_53).abs() < 1e-8);
    }

    #[test]
    fn log_ndtr_matches_direct_evaluation() {
        for &x in &[-19.0, -10.0, -3.0, -0.5, 0.0, 1.0, 5.0] {
            let direct = ndtr(x).ln();
            assert!((log_ndtr(x) - direct).abs() < 1e-10 * direct.abs().max(1.0), "x = {x}");
        }
    }

    #[test]
    fn log_ndtr_asymptotic_branch_is_continuous() {
        let lo = log_ndtr(-20.0 - 1e-9);
        let hi = log_ndtr(-20.0 + 1e-9);
        assert!((lo - hi).abs() < 1e-7 * hi.abs());
        assert!(log_ndtr(-40.0).is_finite());
        assert!(log_ndtr(-1e4) < -4.9e7);
    }

    #[test]
    fn ndtri_inverts_ndtr() {
        for &p in &[1e-12, 1e-4, 0.025, 0.5, 0.9, 0.975, 1.0 - 1e-9] {
            let x = ndtri(p);
            assert!((ndtr(x) - p).abs() < 1e-12_f64.max(p * 1e-9), "p = {p}");
        }
        assert!((ndtri(0.975) - 1.959_963_984_540_054).abs() < 1e-12);
    }

    #[test]
    fn inverse_mills_tail_behaviour() {
        // φ(x)/Φ(x) ~ -x for x -> -∞
        let x = -50.0;
        assert!((inv_mills(x) / (-x) - 1.0).abs() < 1e-3);
        assert!((inv_mills(0.0) - 2.0 * (-LN_SQRT_2PI).exp()).abs() < 1e-12);
    }
}
