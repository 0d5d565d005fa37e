use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::moments::{hill_order, hill_tail_shape, WeightMoments};
use super::reference::{ReferenceDensity, Space};
use super::sampling::{draw_eta_sample, draw_zeta_sample};
use crate::da::DaModel;
use crate::error::{Error, Result};
use crate::kernels::special::ndtri;
use crate::rng::RandomStream;

/// Samples per work unit. Work units are merged in index order, so results
/// do not depend on how many threads process them.
pub const BLOCK_SIZE: u64 = 4096;

/// ESS fraction below which an estimate is flagged degenerate.
pub const DEGENERATE_ESS_FRACTION: f64 = 0.01;
/// Largest single-weight share above which an estimate is flagged degenerate.
pub const DEGENERATE_MAX_SHARE: f64 = 0.05;
/// Tail shape above which the weight variance is estimated to be infinite.
pub const DEGENERATE_TAIL_SHAPE: f64 = 0.5;

/// Which sampling scheme produces `(U*, V*)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// η draws with ω on V-space, plain DA chain.
    #[serde(rename = "alg1")]
    Alg1,
    /// η draws, sandwich chain.
    #[serde(rename = "alg1S")]
    Alg1S,
    /// ζ draws with ψ on U-space, plain DA chain.
    #[serde(rename = "alg2")]
    Alg2,
    /// ζ draws, sandwich chain.
    #[serde(rename = "alg2S")]
    Alg2S,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Alg1, Variant::Alg1S, Variant::Alg2, Variant::Alg2S];

    pub fn reference_space(self) -> Space {
        match self {
            Variant::Alg1 | Variant::Alg1S => Space::V,
            Variant::Alg2 | Variant::Alg2S => Space::U,
        }
    }

    pub fn sandwich(self) -> bool {
        matches!(self, Variant::Alg1S | Variant::Alg2S)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Alg1 => "alg1",
            Variant::Alg1S => "alg1S",
            Variant::Alg2 => "alg2",
            Variant::Alg2S => "alg2S",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown variant {s:?} (expected alg1, alg1S, alg2 or alg2S)")))
    }
}

/// Monte Carlo estimate of `s_k` (or `s̃_k` for sandwich variants).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSumEstimate {
    pub k: usize,
    pub variant: Variant,
    pub mean: f64,
    pub std_err: f64,
    pub n_samples: u64,
    pub ess: f64,
    pub max_weight_share: f64,
    /// Hill estimate of the upper-tail shape of the weights.
    pub tail_shape: Option<f64>,
    pub degenerate: bool,
}

impl PowerSumEstimate {
    /// Two-sided normal interval `mean ± z_{1−α/2} · std_err`.
    pub fn ci(&self, alpha: f64) -> (f64, f64) {
        let z = ndtri(1.0 - alpha / 2.0);
        (self.mean - z * self.std_err, self.mean + z * self.std_err)
    }
}

/// Check that `variant` can run on `model` with `reference`.
pub fn check_compatible(model: &dyn DaModel, variant: Variant, reference: &ReferenceDensity) -> Result<()> {
    let caps = model.capabilities();
    let expected = variant.reference_space();
    if reference.space() != expected {
        return Err(Error::ReferenceSpace {
            expected: expected.label(),
            found: reference.space().label(),
        });
    }
    match expected {
        Space::V if !caps.log_pdf_v_given_u => return Err(Error::MissingCapability("log_pdf_v_given_u")),
        Space::U if !caps.log_pdf_u_given_v => return Err(Error::MissingCapability("log_pdf_u_given_v")),
        _ => {}
    }
    if variant.sandwich() && !caps.sandwich {
        return Err(Error::MissingCapability("a sandwich step"));
    }
    let dim = match expected {
        Space::V => model.v_dim(),
        Space::U => model.u_dim(),
    };
    if reference.dim() != dim {
        return Err(Error::InvalidParameters(format!(
            "reference density has dimension {}, model {} has {dim}",
            reference.dim(),
            expected.label()
        )));
    }
    Ok(())
}

/// Importance weight of sample `index`, drawn from `stream.substream(index)`.
fn sample_weight(
    model: &dyn DaModel,
    variant: Variant,
    reference: &ReferenceDensity,
    k: usize,
    stream: &RandomStream,
    index: u64,
) -> Result<f64> {
    let mut rng = stream.substream(index);
    let log_w = match variant.reference_space() {
        Space::V => {
            let (u, v) = draw_eta_sample(model, reference, k, &mut rng, variant.sandwich())?;
            model.log_pdf_v_given_u(&v, &u)? - reference.log_pdf(&v)?
        }
        Space::U => {
            let (u, v) = draw_zeta_sample(model, reference, k, &mut rng, variant.sandwich())?;
            model.log_pdf_u_given_v(&u, &v)? - reference.log_pdf(&u)?
        }
    };
    let w = log_w.exp();
    if w.is_finite() {
        Ok(w)
    } else {
        Err(Error::NonFiniteWeight { k, index, weight: w })
    }
}

/// Classical Monte Carlo estimate of `s_k` from `n` iid importance weights.
///
/// Sample `i` draws from `stream.substream(i)`. Blocks of [`BLOCK_SIZE`]
/// samples run on the current rayon pool and are merged in index order.
pub fn estimate_power_sum(
    model: &dyn DaModel,
    variant: Variant,
    reference: &ReferenceDensity,
    k: usize,
    n: u64,
    stream: &RandomStream,
) -> Result<PowerSumEstimate> {
    if n < 2 {
        return Err(Error::InvalidParameters("need at least 2 samples".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameters("k must be >= 1".into()));
    }
    check_compatible(model, variant, reference)?;

    let top_cap = hill_order(n) + 1;
    let n_blocks = n.div_ceil(BLOCK_SIZE);
    let blocks: Vec<Result<WeightMoments>> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = WeightMoments::new(top_cap);
            let end = ((b + 1) * BLOCK_SIZE).min(n);
            for i in b * BLOCK_SIZE..end {
                acc.push(sample_weight(model, variant, reference, k, stream, i)?);
            }
            Ok(acc)
        })
        .collect();

    let mut total = WeightMoments::new(top_cap);
    for block in blocks {
        total.merge(&block?);
    }

    let ess = total.ess();
    let max_weight_share = total.max_weight_share();
    let tail_shape = hill_tail_shape(&total.top(), n);
    let degenerate = ess / (n as f64) < DEGENERATE_ESS_FRACTION
        || max_weight_share > DEGENERATE_MAX_SHARE
        || tail_shape.is_some_and(|s| s > DEGENERATE_TAIL_SHAPE);
    Ok(PowerSumEstimate {
        k,
        variant,
        mean: total.mean(),
        std_err: total.std_err(),
        n_samples: n,
        ess,
        max_weight_share,
        tail_shape,
        degenerate,
    })
}
