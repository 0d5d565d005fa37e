//! Importance-weighted Monte Carlo estimation of eigenvalue power sums
//! `s_k = Σ λᵢ^k`, bounds on `λ₁`, and experiment orchestration.

pub mod bounds;
pub mod experiment;
pub mod moments;
pub mod power_sum;
pub mod reference;
pub mod sampling;
pub mod stop;

pub use bounds::{bounds_from_power_sums, bounds_from_values, BoundReport};
pub use experiment::{run_power_sum_experiment, run_stream, ExperimentReport, ExperimentRow, ExperimentSettings};
pub use power_sum::{check_compatible, estimate_power_sum, PowerSumEstimate, Variant};
pub use reference::{Density, ReferenceDensity, Space};
pub use sampling::{draw_eta_sample, draw_zeta_sample};
pub use stop::{suggest_stop, StopAdvice};
