//! Monte Carlo estimation of the eigenvalue power sums of data augmentation
//! Markov operators, with bounds and confidence intervals for the second
//! largest eigenvalue.

pub mod cli;
pub mod config;
pub mod da;
pub mod error;
pub mod estimator;
pub mod kernels;
pub mod models;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod runner;

pub use da::{Capabilities, ChainState, DaModel};
pub use error::{Error, Result};
pub use rng::RandomStream;
