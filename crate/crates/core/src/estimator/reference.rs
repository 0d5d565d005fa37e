use std::fmt;

use crate::error::{invalid, Result};
use crate::kernels::DistributionSpec;
use crate::oracle::model::sample_categorical;
use crate::rng::RandomStream;

/// Which block of the DA pair a reference density lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Space {
    /// U-space, where ψ lives.
    U,
    /// V-space, where ω lives.
    V,
}

impl Space {
    pub fn label(self) -> &'static str {
        match self {
            Space::U => "U-space",
            Space::V => "V-space",
        }
    }
}

/// The distribution behind a [`ReferenceDensity`].
#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    Spec(DistributionSpec),
    /// `n` independent copies of a univariate family.
    Product { factor: DistributionSpec, n: usize },
    /// Pmf over grid indices `0..len`.
    Categorical(Vec<f64>),
}

/// A normalized density that can be sampled: ω on V-space or ψ on U-space.
#[derive(Debug, Clone)]
pub struct ReferenceDensity {
    space: Space,
    density: Density,
    cdf: Vec<f64>,
}

impl ReferenceDensity {
    pub fn new(space: Space, density: Density) -> Result<Self> {
        let mut cdf = Vec::new();
        match &density {
            Density::Spec(spec) => spec.validate()?,
            Density::Product { factor, n } => {
                factor.validate()?;
                if factor.dim() != 1 || *n == 0 {
                    return Err(invalid("product densities need a univariate factor and n >= 1"));
                }
            }
            Density::Categorical(p) => {
                if p.is_empty() || p.iter().any(|x| !x.is_finite() || *x <= 0.0) {
                    return Err(invalid("categorical reference needs strictly positive probabilities"));
                }
                let total: f64 = p.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(invalid(format!("categorical reference sums to {total}")));
                }
                let mut acc = 0.0;
                cdf = p
                    .iter()
                    .map(|x| {
                        acc += x;
                        acc
                    })
                    .collect();
            }
        }
        Ok(Self { space, density, cdf })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn dim(&self) -> usize {
        match &self.density {
            Density::Spec(s) => s.dim(),
            Density::Product { n, .. } => *n,
            Density::Categorical(_) => 1,
        }
    }

    pub fn sample(&self, rng: &mut RandomStream) -> Result<Vec<f64>> {
        match &self.density {
            Density::Spec(s) => s.draw(rng),
            Density::Product { factor, n } => {
                let mut out = Vec::with_capacity(*n);
                for _ in 0..*n {
                    out.push(factor.draw(rng)?[0]);
                }
                Ok(out)
            }
            Density::Categorical(_) => Ok(vec![sample_categorical(&self.cdf, rng) as f64]),
        }
    }

    pub fn log_pdf(&self, x: &[f64]) -> Result<f64> {
        match &self.density {
            Density::Spec(s) => s.log_pdf(x),
            Density::Product { factor, n } => {
                if x.len() != *n {
                    return Err(invalid(format!("point has dimension {}, expected {n}", x.len())));
                }
                x.iter().try_fold(0.0, |acc, xi| Ok(acc + factor.log_pdf(&[*xi])?))
            }
            Density::Categorical(p) => match x {
                [i] if *i >= 0.0 && i.fract() == 0.0 && (*i as usize) < p.len() => Ok(p[*i as usize].ln()),
                _ => Ok(f64::NEG_INFINITY),
            },
        }
    }
}

impl fmt::Display for ReferenceDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.space {
            Space::U => "psi",
            Space::V => "omega",
        };
        match &self.density {
            Density::Spec(s) => write!(f, "{name} = {}", describe(s)),
            Density::Product { factor, n } => write!(f, "{name} = product of {n} x {}", describe(factor)),
            Density::Categorical(p) => write!(f, "{name} = categorical over {} states", p.len()),
        }
    }
}

fn describe(spec: &DistributionSpec) -> String {
    match spec {
        DistributionSpec::Normal { mean, sd } => format!("normal(mean={mean}, sd={sd})"),
        DistributionSpec::TruncatedNormal { mean, sd, side } => {
            format!("truncated-normal(mean={mean}, sd={sd}, side={side:?})")
        }
        DistributionSpec::MultivariateNormal { mean, .. } => format!("multivariate-normal(dim={})", mean.len()),
        DistributionSpec::MultivariateT { location, dof, .. } => {
            format!("multivariate-t(dim={}, dof={dof})", location.len())
        }
        DistributionSpec::Gamma { shape, rate } => format!("gamma(shape={shape}, rate={rate})"),
        DistributionSpec::InverseGamma { shape, scale } => format!("inverse-gamma(shape={shape}, scale={scale})"),
        DistributionSpec::Gig { lambda, chi, psi } => format!("gig(lambda={lambda}, chi={chi}, psi={psi})"),
    }
}
