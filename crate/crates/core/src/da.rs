//! Data augmentation chains.
//!
//! A [`DaModel`] bundles the two conditional samplers of a two-block Gibbs
//! sampler on `(U, V)`, optionally their normalized log-densities, and an
//! optional `π_V`-invariant sandwich move on `V`. The Markov chain itself
//! lives on U-space: `v` is drawn fresh inside every step and discarded.

use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// Which optional members a model provides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub struct Capabilities {
    /// `log_pdf_v_given_u` is available (η estimators, Algorithms 1/1S).
    pub log_pdf_v_given_u: bool,
    /// `log_pdf_u_given_v` is available (ζ estimators, Algorithms 2/2S).
    pub log_pdf_u_given_v: bool,
    pub sandwich: bool,
}

/// The two conditionals of a DA algorithm plus optional extras.
///
/// Implementations must be immutable after construction; all randomness
/// comes from the stream argument, consumed in a documented order.
pub trait DaModel: Send + Sync {
    fn name(&self) -> &str;
    fn u_dim(&self) -> usize;
    fn v_dim(&self) -> usize;
    fn capabilities(&self) -> Capabilities;

    fn sample_v_given_u(&self, u: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>>;
    fn sample_u_given_v(&self, v: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>>;

    /// Normalized `ln π_{V|U}(v|u)`.
    fn log_pdf_v_given_u(&self, _v: &[f64], _u: &[f64]) -> Result<f64> {
        Err(Error::MissingCapability("log_pdf_v_given_u"))
    }

    /// Normalized `ln π_{U|V}(u|v)`.
    fn log_pdf_u_given_v(&self, _u: &[f64], _v: &[f64]) -> Result<f64> {
        Err(Error::MissingCapability("log_pdf_u_given_v"))
    }

    /// One draw from the sandwich kernel `s(v, ·)`.
    fn sandwich_step(&self, _v: &[f64], _rng: &mut RandomStream) -> Result<Vec<f64>> {
        Err(Error::MissingCapability("a sandwich step"))
    }
}

/// Current position of the U-chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState(pub Vec<f64>);

impl ChainState {
    pub fn new(u: Vec<f64>) -> Result<Self> {
        if u.iter().all(|x| x.is_finite()) {
            Ok(Self(u))
        } else {
            Err(Error::InvalidParameters("chain state has non-finite entries".into()))
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

pub(crate) fn require_sandwich(model: &dyn DaModel) -> Result<()> {
    if model.capabilities().sandwich {
        Ok(())
    } else {
        Err(Error::MissingCapability("a sandwich step"))
    }
}

/// `v ~ π_{V|U}(·|u)`, then `u' ~ π_{U|V}(·|v)`.
pub fn da_step(model: &dyn DaModel, u: &ChainState, rng: &mut RandomStream) -> Result<ChainState> {
    let v = model.sample_v_given_u(&u.0, rng)?;
    Ok(ChainState(model.sample_u_given_v(&v, rng)?))
}

/// `v ~ π_{V|U}(·|u)`, `v' ~ s(v, ·)`, then `u' ~ π_{U|V}(·|v')`.
pub fn sandwich_da_step(model: &dyn DaModel, u: &ChainState, rng: &mut RandomStream) -> Result<ChainState> {
    require_sandwich(model)?;
    let v = model.sample_v_given_u(&u.0, rng)?;
    let v = model.sandwich_step(&v, rng)?;
    Ok(ChainState(model.sample_u_given_v(&v, rng)?))
}

/// `k` successive steps of the plain or sandwich chain.
pub fn run_chain(
    model: &dyn DaModel,
    u0: &ChainState,
    k: usize,
    rng: &mut RandomStream,
    sandwich: bool,
) -> Result<ChainState> {
    if k == 0 {
        return Err(Error::InvalidParameters("run_chain needs k >= 1".into()));
    }
    if sandwich {
        require_sandwich(model)?;
    }
    let mut u = u0.clone();
    for _ in 0..k {
        u = advance(model, &u, rng, sandwich)?;
    }
    Ok(u)
}

#[inline]
pub(crate) fn advance(
    model: &dyn DaModel,
    u: &ChainState,
    rng: &mut RandomStream,
    sandwich: bool,
) -> Result<ChainState> {
    if sandwich {
        sandwich_da_step(model, u, rng)
    } else {
        da_step(model, u, rng)
    }
}
