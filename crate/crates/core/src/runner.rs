//! Turns a [`RunConfig`] into a model, a reference density and a report.

use nalgebra::{DMatrix, DVector};

use crate::config::{ModelKind, RunConfig};
use crate::da::DaModel;
use crate::error::{Error, Result};
use crate::estimator::{run_power_sum_experiment, ExperimentSettings, ReferenceDensity, Space, Variant};
use crate::models::probit::{DEFAULT_G, DEFAULT_PSI_DOF};
use crate::models::regression::{DEFAULT_OMEGA_ALPHA, DEFAULT_OMEGA_GAMMA};
use crate::models::{
    embedded_regression_fixture, gaussian_exact_spectrum, load_joint_csv, load_regression_csv, GaussianToyModel,
    ProbitModel, RegressionModel,
};
use crate::oracle::{random_finite_chain, FiniteDaChain, FiniteDaModel, SpectralSummary};
use crate::report::{ExactSpectrum, ModelInfo, ReportDocument};
use crate::rng::RandomStream;

/// Stream used to draw the random finite chain when no joint pmf file is given.
pub const ORACLE_CHAIN_STREAM: u64 = u64::MAX;
/// Grid size of that random chain.
pub const ORACLE_CHAIN_SIZE: usize = 6;

/// A model ready to run, with the reference density matching the variant.
pub struct PreparedRun {
    pub model: Box<dyn DaModel>,
    pub reference: ReferenceDensity,
    pub exact: Option<ExactSpectrum>,
}

fn unsupported(model: ModelKind, variant: Variant, why: &str) -> Error {
    Error::Config(format!("variant {variant} is not available for model {model}: {why}"))
}

pub fn prepare(config: &RunConfig) -> Result<PreparedRun> {
    config.validate()?;
    let variant = config.variant();
    let kind = config.model;
    match kind {
        ModelKind::GaussianToy => {
            if variant.sandwich() {
                return Err(unsupported(kind, variant, "the model has no sandwich step"));
            }
            let reference = match variant.reference_space() {
                Space::V => GaussianToyModel::default_omega(),
                Space::U => GaussianToyModel::default_psi(),
            };
            let g = gaussian_exact_spectrum(config.k_max);
            Ok(PreparedRun {
                model: Box::new(GaussianToyModel::new()),
                reference,
                exact: Some(ExactSpectrum {
                    lambda1: 0.5,
                    power_sums: g.power_sums,
                    upper_bounds: g.upper_bounds,
                    lower_bounds: g.lower_bounds,
                }),
            })
        }
        ModelKind::Probit => {
            if variant.reference_space() == Space::V {
                return Err(unsupported(kind, variant, "only the psi-based variants alg2 and alg2S are provided"));
            }
            let path = config.data_path.as_deref().expect("validated");
            let data = load_regression_csv(path)?;
            let p = data.x.ncols();
            let g = config.prior.g.unwrap_or(DEFAULT_G);
            let q = crate::models::g_prior_precision(&data.x, g)?;
            let w = match &config.prior.w {
                Some(w) if w.len() != p => {
                    return Err(Error::Config(format!("prior.w has {} entries but the data have p = {p}", w.len())))
                }
                Some(w) => DVector::from_column_slice(w),
                None => DVector::zeros(p),
            };
            let model = ProbitModel::new(data.x, data.y.as_slice(), q, w)?;
            let reference = model.psi(config.psi.dof.unwrap_or(DEFAULT_PSI_DOF))?;
            Ok(PreparedRun {
                model: Box::new(model),
                reference,
                exact: None,
            })
        }
        ModelKind::Regression => {
            if variant != Variant::Alg1 {
                return Err(unsupported(kind, variant, "only alg1 is provided"));
            }
            let (x, y) = match &config.data_path {
                Some(path) => {
                    let d = load_regression_csv(path)?;
                    (d.x, d.y)
                }
                None => embedded_regression_fixture(),
            };
            let model = RegressionModel::new(x, y)?;
            let reference = model.omega(
                config.omega.alpha.unwrap_or(DEFAULT_OMEGA_ALPHA),
                config.omega.gamma.unwrap_or(DEFAULT_OMEGA_GAMMA),
            )?;
            Ok(PreparedRun {
                model: Box::new(model),
                reference,
                exact: None,
            })
        }
        ModelKind::FiniteOracle => {
            let chain = match &config.data_path {
                Some(path) => FiniteDaChain::from_joint(load_joint_csv(path)?)?,
                None => random_finite_chain(
                    ORACLE_CHAIN_SIZE,
                    ORACLE_CHAIN_SIZE,
                    &mut RandomStream::new(config.seed, ORACLE_CHAIN_STREAM),
                )?,
            };
            let spectrum = chain.exact_spectrum();
            let mut model = FiniteDaModel::new(chain);
            // The extra-q-step sandwich chain has transition P², so its
            // eigenvalues are the squares of the plain ones.
            let spectrum = if variant.sandwich() {
                model = model.with_sandwich();
                SpectralSummary::from_eigenvalues(spectrum.eigenvalues.iter().map(|l| l * l).collect())
            } else {
                spectrum
            };
            let reference = match variant.reference_space() {
                Space::V => model.uniform_omega(),
                Space::U => model.uniform_psi(),
            };
            Ok(PreparedRun {
                model: Box::new(model),
                reference,
                exact: Some(ExactSpectrum::from_summary(&spectrum, config.k_max)),
            })
        }
    }
}

/// Run the configured experiment. With `include_runtime = false` the
/// document depends only on the config (never on `workers` or timing).
pub fn run_config(config: &RunConfig, include_runtime: bool) -> Result<ReportDocument> {
    let prepared = prepare(config)?;
    let settings = ExperimentSettings {
        variant: config.variant(),
        k_max: config.k_max,
        n_samples: config.n_samples,
        alpha: config.alpha,
        seed: config.seed,
        workers: config.workers,
    };
    let report = run_power_sum_experiment(prepared.model.as_ref(), &prepared.reference, &settings)?;
    let info = ModelInfo {
        name: prepared.model.name().to_string(),
        u_dim: prepared.model.u_dim(),
        v_dim: prepared.model.v_dim(),
        capabilities: prepared.model.capabilities(),
        reference: prepared.reference.to_string(),
    };
    Ok(ReportDocument::new(config, info, &report, prepared.exact, include_runtime))
}

/// A finite chain given directly as a matrix; convenience for callers that
/// do not go through files.
pub fn finite_model_from_joint(joint: DMatrix<f64>) -> Result<FiniteDaModel> {
    Ok(FiniteDaModel::new(FiniteDaChain::from_joint(joint)?))
}
