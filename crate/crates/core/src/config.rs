//! Experiment configuration: a TOML file whose values can be overridden by
//! command-line flags.
//!
//! ```toml
//! model = "regression"
//! variant = "alg1"
//! k_max = 4
//! n_samples = 200000
//! alpha = 0.05
//! seed = 7
//! workers = 4
//!
//! [omega]
//! alpha = 0.5
//! gamma = 0.03125
//!
//! [output]
//! json = "report.json"
//! csv = "report.csv"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::Variant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    GaussianToy,
    Probit,
    Regression,
    FiniteOracle,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::GaussianToy,
        ModelKind::Probit,
        ModelKind::Regression,
        ModelKind::FiniteOracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::GaussianToy => "gaussian-toy",
            ModelKind::Probit => "probit",
            ModelKind::Regression => "regression",
            ModelKind::FiniteOracle => "finite-oracle",
        }
    }

    /// Variant used when the config does not name one.
    pub fn default_variant(self) -> Variant {
        match self {
            ModelKind::Probit => Variant::Alg2,
            _ => Variant::Alg1,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown model {s:?} (expected gaussian-toy, probit, regression or finite-oracle)"
                ))
            })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorConfig {
    /// Probit prior precision `Q = XᵀX / g`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    /// Probit prior vector `w`; zero when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dof: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

impl OutputConfig {
    fn is_empty(&self) -> bool {
        self.json.is_none() && self.csv.is_none()
    }
}

fn default_k_max() -> usize {
    4
}
fn default_n_samples() -> u64 {
    100_000
}
fn default_alpha() -> f64 {
    0.05
}
fn default_workers() -> usize {
    1
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

/// A complete experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelKind,
    /// Defaults per model: `alg2` for probit, `alg1` otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_n_samples")]
    pub n_samples: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub prior: PriorConfig,
    #[serde(default, skip_serializing_if = "is_default")]
    pub psi: PsiConfig,
    #[serde(default, skip_serializing_if = "is_default")]
    pub omega: OmegaConfig,
    #[serde(default, skip_serializing_if = "OutputConfig::is_empty")]
    pub output: OutputConfig,
}

/// Values given on the command line; each `Some` replaces the file value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub model: Option<ModelKind>,
    pub variant: Option<Variant>,
    pub k_max: Option<usize>,
    pub n_samples: Option<u64>,
    pub alpha: Option<f64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub data_path: Option<PathBuf>,
    pub prior_g: Option<f64>,
    pub psi_dof: Option<f64>,
    pub omega_alpha: Option<f64>,
    pub omega_gamma: Option<f64>,
    pub output_json: Option<PathBuf>,
    pub output_csv: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(model: ModelKind) -> Self {
        Self {
            model,
            variant: None,
            k_max: default_k_max(),
            n_samples: default_n_samples(),
            alpha: default_alpha(),
            seed: 0,
            workers: default_workers(),
            data_path: None,
            prior: PriorConfig::default(),
            psi: PsiConfig::default(),
            omega: OmegaConfig::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Start from a file if given, otherwise from `overrides.model`, then
    /// apply every override.
    pub fn resolve(file: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut config = match (file, overrides.model) {
            (Some(path), _) => Self::from_file(path)?,
            (None, Some(model)) => Self::new(model),
            (None, None) => return Err(Error::Config("give a config file or --model".into())),
        };
        config.apply(overrides);
        config.validate()?;
        Ok(config)
    }

    pub fn apply(&mut self, o: &Overrides) {
        fn set<T: Clone>(slot: &mut T, value: &Option<T>) {
            if let Some(v) = value {
                *slot = v.clone();
            }
        }
        set(&mut self.model, &o.model);
        if o.variant.is_some() {
            self.variant = o.variant;
        }
        set(&mut self.k_max, &o.k_max);
        set(&mut self.n_samples, &o.n_samples);
        set(&mut self.alpha, &o.alpha);
        set(&mut self.seed, &o.seed);
        set(&mut self.workers, &o.workers);
        if o.data_path.is_some() {
            self.data_path.clone_from(&o.data_path);
        }
        if o.prior_g.is_some() {
            self.prior.g = o.prior_g;
        }
        if o.psi_dof.is_some() {
            self.psi.dof = o.psi_dof;
        }
        if o.omega_alpha.is_some() {
            self.omega.alpha = o.omega_alpha;
        }
        if o.omega_gamma.is_some() {
            self.omega.gamma = o.omega_gamma;
        }
        if o.output_json.is_some() {
            self.output.json.clone_from(&o.output_json);
        }
        if o.output_csv.is_some() {
            self.output.csv.clone_from(&o.output_csv);
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant.unwrap_or_else(|| self.model.default_variant())
    }

    /// Checks that do not need the data: ranges and referenced files.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.k_max == 0 {
            return bad("k_max must be >= 1".into());
        }
        if self.n_samples < 2 {
            return bad(format!("n_samples must be >= 2, got {}", self.n_samples));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.workers == 0 {
            return bad("workers must be >= 1".into());
        }
        if let Some(g) = self.prior.g {
            if !(g.is_finite() && g > 0.0) {
                return bad(format!("prior.g must be > 0, got {g}"));
            }
        }
        if let Some(dof) = self.psi.dof {
            if !(dof.is_finite() && dof > 0.0) {
                return bad(format!("psi.dof must be > 0, got {dof}"));
            }
        }
        match (self.model, &self.data_path) {
            (ModelKind::Probit, None) => return bad("the probit model needs data_path".into()),
            (_, Some(path)) if !path.exists() => return Err(Error::MissingFile(path.clone())),
            _ => {}
        }
        Ok(())
    }
}
