//! Samplers and normalized log-densities for every family the models use.
//!
//! All log-densities here integrate to one. Out-of-support points evaluate
//! to `-inf` rather than erroring.

pub mod gig;
pub mod multivariate;
pub mod special;
pub mod truncnorm;

use nalgebra::DVector;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{invalid, Result};
use crate::rng::RandomStream;

pub use multivariate::CholeskyFactor;
pub use truncnorm::Side;

/// A fully parameterized distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    Normal { mean: f64, sd: f64 },
    TruncatedNormal { mean: f64, sd: f64, side: Side },
    MultivariateNormal { mean: DVector<f64>, scale: CholeskyFactor },
    MultivariateT { location: DVector<f64>, scale: CholeskyFactor, dof: f64 },
    Gamma { shape: f64, rate: f64 },
    InverseGamma { shape: f64, scale: f64 },
    /// Generalized inverse Gaussian with kernel `x^{λ-1} exp(-(χ/x + ψx)/2)`.
    Gig { lambda: f64, chi: f64, psi: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite and > 0, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite, got {v}")))
    }
}

impl DistributionSpec {
    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        let s = Self::Normal { mean, sd };
        s.validate()?;
        Ok(s)
    }

    pub fn truncated_normal(mean: f64, sd: f64, side: Side) -> Result<Self> {
        let s = Self::TruncatedNormal { mean, sd, side };
        s.validate()?;
        Ok(s)
    }

    pub fn multivariate_normal(mean: DVector<f64>, scale: &nalgebra::DMatrix<f64>) -> Result<Self> {
        let s = Self::MultivariateNormal {
            mean,
            scale: CholeskyFactor::new(scale)?,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn multivariate_t(location: DVector<f64>, scale: &nalgebra::DMatrix<f64>, dof: f64) -> Result<Self> {
        let s = Self::MultivariateT {
            location,
            scale: CholeskyFactor::new(scale)?,
            dof,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        let s = Self::Gamma { shape, rate };
        s.validate()?;
        Ok(s)
    }

    pub fn inverse_gamma(shape: f64, scale: f64) -> Result<Self> {
        let s = Self::InverseGamma { shape, scale };
        s.validate()?;
        Ok(s)
    }

    pub fn gig(lambda: f64, chi: f64, psi: f64) -> Result<Self> {
        let s = Self::Gig { lambda, chi, psi };
        s.validate()?;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::MultivariateNormal { mean, .. } => mean.len(),
            Self::MultivariateT { location, .. } => location.len(),
            _ => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Normal { mean, sd } | Self::TruncatedNormal { mean, sd, .. } => {
                finite("mean", *mean)?;
                positive("sd", *sd)
            }
            Self::MultivariateNormal { mean, scale } => {
                if mean.len() != scale.dim() {
                    return Err(invalid("mean and scale dimensions differ"));
                }
                mean.iter().try_for_each(|m| finite("mean", *m))
            }
            Self::MultivariateT { location, scale, dof } => {
                if location.len() != scale.dim() {
                    return Err(invalid("location and scale dimensions differ"));
                }
                location.iter().try_for_each(|m| finite("location", *m))?;
                positive("dof", *dof)
            }
            Self::Gamma { shape, rate } => {
                positive("shape", *shape)?;
                positive("rate", *rate)
            }
            Self::InverseGamma { shape, scale } => {
                positive("shape", *shape)?;
                positive("scale", *scale)
            }
            Self::Gig { lambda, chi, psi } => {
                if *lambda != gig::LAMBDA {
                    return Err(invalid(format!("GIG only supported at lambda = -1/2, got {lambda}")));
                }
                positive("chi", *chi)?;
                positive("psi", *psi)
            }
        }
    }

    /// One exact draw.
    pub fn draw(&self, rng: &mut RandomStream) -> Result<Vec<f64>> {
        self.validate()?;
        let x = match self {
            Self::Normal { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                vec![mean + sd * z]
            }
            Self::TruncatedNormal { mean, sd, side } => vec![truncnorm::sample(*mean, *sd, *side, rng)],
            Self::MultivariateNormal { mean, scale } => {
                multivariate::mvn_sample(mean, scale, rng).as_slice().to_vec()
            }
            Self::MultivariateT { location, scale, dof } => {
                multivariate::mvt_sample(location, scale, *dof, rng).as_slice().to_vec()
            }
            Self::Gamma { shape, rate } => vec![sample_gamma(*shape, *rate, rng)],
            Self::InverseGamma { shape, scale } => vec![1.0 / sample_gamma(*shape, *scale, rng)],
            Self::Gig { chi, psi, .. } => vec![gig::sample(*chi, *psi, rng)],
        };
        Ok(x)
    }

    /// Normalized natural-log density; `-inf` outside the support.
    pub fn log_pdf(&self, x: &[f64]) -> Result<f64> {
        self.validate()?;
        if x.len() != self.dim() {
            return Err(invalid(format!("point has dimension {}, expected {}", x.len(), self.dim())));
        }
        let v = match self {
            Self::Normal { mean, sd } => normal_log_pdf(x[0], *mean, *sd),
            Self::TruncatedNormal { mean, sd, side } => truncnorm::log_pdf(x[0], *mean, *sd, *side),
            Self::MultivariateNormal { mean, scale } => {
                multivariate::mvn_log_pdf(&DVector::from_column_slice(x), mean, scale)
            }
            Self::MultivariateT { location, scale, dof } => {
                multivariate::mvt_log_pdf(&DVector::from_column_slice(x), location, scale, *dof)
            }
            Self::Gamma { shape, rate } => gamma_log_pdf(x[0], *shape, *rate),
            Self::InverseGamma { shape, scale } => inverse_gamma_log_pdf(x[0], *shape, *scale),
            Self::Gig { chi, psi, .. } => gig::log_pdf(x[0], *chi, *psi),
        };
        Ok(v)
    }
}

pub fn normal_log_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    special::log_phi((x - mean) / sd) - sd.ln()
}

pub fn sample_gamma(shape: f64, rate: f64, rng: &mut RandomStream) -> f64 {
    Gamma::new(shape, 1.0 / rate)
        .expect("gamma parameters validated")
        .sample(rng)
}

pub fn gamma_log_pdf(x: f64, shape: f64, rate: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    shape * rate.ln() - special::ln_gamma(shape) + (shape - 1.0) * x.ln() - rate * x
}

pub fn inverse_gamma_log_pdf(x: f64, shape: f64, scale: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    shape * scale.ln() - special::ln_gamma(shape) - (shape + 1.0) * x.ln() - scale / x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_normal_at_zero() {
        let d = DistributionSpec::normal(0.0, 1.0).unwrap();
        assert!((d.log_pdf(&[0.0]).unwrap() + 0.918_938_53).abs() < 1e-8);
    }

    #[test]
    fn inverse_gamma_substitution() {
        let d = DistributionSpec::inverse_gamma(1.0, 0.125).unwrap();
        assert!((d.log_pdf(&[0.125]).unwrap() - (8.0f64.ln() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(DistributionSpec::normal(0.0, 0.0).is_err());
        assert!(DistributionSpec::gamma(-1.0, 1.0).is_err());
        assert!(DistributionSpec::inverse_gamma(1.0, f64::NAN).is_err());
        assert!(DistributionSpec::gig(0.5, 1.0, 1.0).is_err());
        assert!(DistributionSpec::gig(-0.5, 0.0, 1.0).is_err());
        let bad = DistributionSpec::Gamma { shape: 1.0, rate: -2.0 };
        let mut rng = RandomStream::new(0, 0);
        assert!(bad.draw(&mut rng).is_err());
        assert!(bad.log_pdf(&[1.0]).is_err());
    }

    #[test]
    fn out_of_support_is_neg_infinity() {
        let g = DistributionSpec::gamma(2.0, 1.0).unwrap();
        assert_eq!(g.log_pdf(&[-1.0]).unwrap(), f64::NEG_INFINITY);
        let ig = DistributionSpec::gig(-0.5, 1.0, 1.0).unwrap();
        assert_eq!(ig.log_pdf(&[0.0]).unwrap(), f64::NEG_INFINITY);
    }
}
