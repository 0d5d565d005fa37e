//! Built-in DA models.

pub mod data;
pub mod fixture;
pub mod gaussian;
pub mod independence;
pub mod probit;
pub mod regression;

pub use data::{load_joint_csv, load_regression_csv, RegressionData};
pub use fixture::embedded_regression_fixture;
pub use gaussian::{gaussian_exact_spectrum, GaussianSpectrum, GaussianToyModel};
pub use independence::IndependenceModel;
pub use probit::{g_prior_precision, ProbitModel};
pub use regression::RegressionModel;
