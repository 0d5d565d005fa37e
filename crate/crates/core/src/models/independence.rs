use rand_distr::{Distribution, StandardNormal};

use crate::da::{Capabilities, DaModel};
use crate::error::{invalid, Result};
use crate::estimator::{Density, ReferenceDensity, Space};
use crate::kernels::{normal_log_pdf, DistributionSpec};
use crate::rng::RandomStream;

/// `U` and `V` independent standard normals: the iid chain, `s_k = 1` for all `k`.
///
/// With ω = π_V (or ψ = π_U) every importance weight is exactly one.
#[derive(Debug, Clone, Copy, Default)]
pub struct IndependenceModel;

fn scalar(x: &[f64]) -> Result<f64> {
    match x {
        [v] => Ok(*v),
        _ => Err(invalid("expected a scalar state")),
    }
}

fn standard(space: Space) -> ReferenceDensity {
    let spec = DistributionSpec::normal(0.0, 1.0).expect("valid");
    ReferenceDensity::new(space, Density::Spec(spec)).expect("valid")
}

impl IndependenceModel {
    /// ω = π_V
    pub fn omega() -> ReferenceDensity {
        standard(Space::V)
    }

    /// ψ = π_U
    pub fn psi() -> ReferenceDensity {
        standard(Space::U)
    }
}

impl DaModel for IndependenceModel {
    fn name(&self) -> &str {
        "independence"
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
            sandwich: true,
        }
    }

    fn sample_v_given_u(&self, u: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
        scalar(u)?;
        Ok(vec![StandardNormal.sample(rng)])
    }

    fn sample_u_given_v(&self, v: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
        scalar(v)?;
        Ok(vec![StandardNormal.sample(rng)])
    }

    fn log_pdf_v_given_u(&self, v: &[f64], u: &[f64]) -> Result<f64> {
        scalar(u)?;
        Ok(normal_log_pdf(scalar(v)?, 0.0, 1.0))
    }

    fn log_pdf_u_given_v(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        scalar(v)?;
        Ok(normal_log_pdf(scalar(u)?, 0.0, 1.0))
    }

    /// Redraw `v` from `π_V`, which trivially leaves `π_V` invariant.
    fn sandwich_step(&self, v: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
        scalar(v)?;
        Ok(vec![StandardNormal.sample(rng)])
    }
}
