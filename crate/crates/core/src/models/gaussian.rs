//! The Gaussian toy chain.
//!
//! `π_U = N(0, 1/2)`, `V | U = u ~ N(u/2, 1/8)`, `U | V = v ~ N(v, 1/4)`,
//! so `π_V = N(0, 1/4)` and one DA step is the AR(1) move
//! `u' ~ N(u/2, 3/8)`. The operator has eigenvalues `λᵢ = 2^{-i}`.
//! (Variances throughout; `sd` fields hold their square roots.)

use rand_distr::{Distribution, StandardNormal};

use crate::da::{Capabilities, DaModel};
use crate::error::{invalid, Result};
use crate::estimator::{Density, ReferenceDensity, Space};
use crate::kernels::{normal_log_pdf, DistributionSpec};
use crate::rng::RandomStream;

const V_GIVEN_U_SD: f64 = 0.353_553_390_593_273_8; // sqrt(1/8)
const U_GIVEN_V_SD: f64 = 0.5; // sqrt(1/4)

#[derive(Debug, Clone, Copy, Default)]
pub struct GaussianToyModel;

fn scalar(x: &[f64]) -> Result<f64> {
    match x {
        [v] => Ok(*v),
        _ => Err(invalid(format!("expected a scalar state, got {} entries", x.len()))),
    }
}

fn normal_reference(space: Space, variance: f64) -> ReferenceDensity {
    let spec = DistributionSpec::normal(0.0, variance.sqrt()).expect("positive variance");
    ReferenceDensity::new(space, Density::Spec(spec)).expect("valid spec")
}

impl GaussianToyModel {
    pub fn new() -> Self {
        Self
    }

    /// ω ∝ exp(−v²/2), i.e. N(0, 1): heavier-tailed than `π_V`, finite weight variance.
    pub fn default_omega() -> ReferenceDensity {
        normal_reference(Space::V, 1.0)
    }

    /// ω = π_V = N(0, 1/4). The weight variance is infinite for this choice.
    pub fn pathological_omega() -> ReferenceDensity {
        normal_reference(Space::V, 0.25)
    }

    /// ψ = N(0, 2), heavy enough that the U-side weights have finite variance
    /// (needs variance above 5/3).
    pub fn default_psi() -> ReferenceDensity {
        normal_reference(Space::U, 2.0)
    }

    /// ψ = π_U = N(0, 1/2); useful for drawing from stationarity.
    pub fn stationary_psi() -> ReferenceDensity {
        normal_reference(Space::U, 0.5)
    }
}

impl DaModel for GaussianToyModel {
    fn name(&self) -> &str {
        "gaussian-toy"
    }

    fn u_dim(&self) -> usize {
        1
    }

    fn v_dim(&self) -> usize {
        1
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            log_pdf_v_given_u: true,
            log_pdf_u_given_v: true,
            sandwich: false,
        }
    }

    fn sample_v_given_u(&self, u: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
        let z: f64 = StandardNormal.sample(rng);
        Ok(vec![0.5 * scalar(u)? + V_GIVEN_U_SD * z])
    }

    fn sample_u_given_v(&self, v: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
        let z: f64 = StandardNormal.sample(rng);
        Ok(vec![scalar(v)? + U_GIVEN_V_SD * z])
    }

    fn log_pdf_v_given_u(&self, v: &[f64], u: &[f64]) -> Result<f64> {
        Ok(normal_log_pdf(scalar(v)?, 0.5 * scalar(u)?, V_GIVEN_U_SD))
    }

    fn log_pdf_u_given_v(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        Ok(normal_log_pdf(scalar(u)?, scalar(v)?, U_GIVEN_V_SD))
    }
}

/// Closed-form spectral quantities of the Gaussian toy chain.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSpectrum {
    pub power_sums: Vec<f64>,
    pub upper_bounds: Vec<f64>,
    pub lower_bounds: Vec<f64>,
}

/// `s_k = 1/(1 − 2^{−k})` with `u_k`, `l_k` for `k = 1..=k_max`.
///
/// Uses `s_k − 1 = 1/(2^k − 1)` directly, which stays accurate for large `k`.
pub fn gaussian_exact_spectrum(k_max: usize) -> GaussianSpectrum {
    let excess = |k: usize| 1.0 / (2f64.powi(k as i32) - 1.0);
    let power_sums = (1..=k_max).map(|k| 1.0 + excess(k)).collect();
    let upper_bounds = (1..=k_max).map(|k| excess(k).powf(1.0 / k as f64)).collect();
    let lower_bounds = (1..=k_max)
        .map(|k| if k == 1 { 0.0 } else { excess(k) / excess(k - 1) })
        .collect();
    GaussianSpectrum {
        power_sums,
        upper_bounds,
        lower_bounds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conditional_density_at_origin() {
        let m = GaussianToyModel::new();
        let v = m.log_pdf_v_given_u(&[0.0], &[0.0]).unwrap();
        assert!((v - 0.120_782_237_635_245_25).abs() < 1e-12, "{v}");
    }

    #[test]
    fn exact_spectrum_values() {
        let s = gaussian_exact_spectrum(4);
        assert_eq!(s.power_sums[0], 2.0);
        assert_eq!(s.upper_bounds[0], 1.0);
        assert_eq!(s.lower_bounds[0], 0.0);
        assert!((s.power_sums[3] - 16.0 / 15.0).abs() < 1e-15);
        assert!((s.upper_bounds[3] - 0.508_132_748_154_614_7).abs() < 1e-12);
        assert!((s.lower_bounds[3] - 7.0 / 15.0).abs() < 1e-15);
        let far = gaussian_exact_spectrum(200);
        assert!((far.upper_bounds[199] - 0.5).abs() < 1e-2);
        assert!((far.lower_bounds[199] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_vector_states() {
        let mut rng = RandomStream::new(0, 0);
        assert!(GaussianToyModel.sample_v_given_u(&[0.0, 1.0], &mut rng).is_err());
    }
}
