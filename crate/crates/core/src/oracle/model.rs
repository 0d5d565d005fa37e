use crate::da::{Capabilities, DaModel};
use crate::error::{invalid, Result};
use crate::estimator::{Density, ReferenceDensity, Space};
use crate::rng::RandomStream;

use super::FiniteDaChain;

/// A [`FiniteDaChain`] exposed as a [`DaModel`] with categorical conditionals.
///
/// States are encoded as a single coordinate holding the grid index. An
/// optional sandwich step applies one extra `q`-step on V-space,
/// `v ↦ u ~ Π_{U|V}(·|v) ↦ v' ~ Π_{V|U}(·|u)`, which leaves `π_V` invariant.
#[derive(Debug, Clone)]
pub struct FiniteDaModel {
    chain: FiniteDaChain,
    /// Row-wise cumulative `Π_{V|U}`.
    v_cdf: Vec<Vec<f64>>,
    /// Row-wise cumulative `Π_{U|V}`.
    u_cdf: Vec<Vec<f64>>,
    sandwich: bool,
}

fn cumulative(rows: impl Iterator<Item = Vec<f64>>) -> Vec<Vec<f64>> {
    rows.map(|r| {
        let mut acc = 0.0;
        r.into_iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect()
    })
    .collect()
}

pub(crate) fn sample_categorical(cdf: &[f64], rng: &mut RandomStream) -> usize {
    let total = *cdf.last().expect("non-empty cdf");
    let target = rng.uniform_open() * total;
    cdf.iter().position(|c| target < *c).unwrap_or(cdf.len() - 1)
}

fn index(x: &[f64], len: usize) -> Result<usize> {
    match x {
        [i] if *i >= 0.0 && i.fract() == 0.0 && (*i as usize) < len => Ok(*i as usize),
        _ => Err(invalid(format!("{x:?} is not a grid index below {len}"))),
    }
}

impl FiniteDaModel {
    pub fn new(chain: FiniteDaChain) -> Self {
        let v_cdf = cumulative(chain.v_given_u().row_iter().map(|r| r.iter().copied().collect()));
        let u_cdf = cumulative(chain.u_given_v().row_iter().map(|r| r.iter().copied().collect()));
        Self {
            chain,
            v_cdf,
            u_cdf,
            sandwich: false,
        }
    }

    /// Same chain with the extra-`q`-step sandwich move enabled.
    pub fn with_sandwich(mut self) -> Self {
        self.sandwich = true;
        self
    }

    pub fn chain(&self) -> &FiniteDaChain {
        &self.chain
    }

    /// Uniform ω on the V grid.
    pub fn uniform_omega(&self) -> ReferenceDensity {
        let n = self.chain.pi_v().len();
        ReferenceDensity::new(Space::V, Density::Categorical(vec![1.0 / n as f64; n])).expect("valid pmf")
    }

    /// Uniform ψ on the U grid.
    pub fn uniform_psi(&self) -> ReferenceDensity {
        let m = self.chain.pi_u().len();
        ReferenceDensity::new(Space::U, Density::Categorical(vec![1.0 / m as f64; m])).expect("valid pmf")
    }

    fn m(&self) -> usize {
        self.chain.pi_u().len()
    }

    fn n(&self) -> usize {
        self.chain.pi_v().len()
    }
}

impl DaModel for FiniteDaModel {
    fn name(&self) -> &str {
        "finite-oracle"
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
            sandwich: self.sandwich,
        }
    }

    fn sample_v_given_u(&self, u: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
        let u = index(u, self.m())?;
        Ok(vec![sample_categorical(&self.v_cdf[u], rng) as f64])
    }

    fn sample_u_given_v(&self, v: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
        let v = index(v, self.n())?;
        Ok(vec![sample_categorical(&self.u_cdf[v], rng) as f64])
    }

    fn log_pdf_v_given_u(&self, v: &[f64], u: &[f64]) -> Result<f64> {
        let (u, v) = (index(u, self.m())?, index(v, self.n())?);
        Ok(self.chain.v_given_u()[(u, v)].ln())
    }

    fn log_pdf_u_given_v(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        let (u, v) = (index(u, self.m())?, index(v, self.n())?);
        Ok(self.chain.u_given_v()[(v, u)].ln())
    }

    fn sandwich_step(&self, v: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
        if !self.sandwich {
            return Err(crate::error::Error::MissingCapability("a sandwich step"));
        }
        let u = self.sample_u_given_v(v, rng)?;
        self.sample_v_given_u(&u, rng)
    }
}
