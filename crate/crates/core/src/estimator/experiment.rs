use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::bounds::{bounds_from_power_sums, BoundReport};
use super::power_sum::{check_compatible, estimate_power_sum, PowerSumEstimate, Variant};
use super::reference::ReferenceDensity;
use super::stop::{suggest_stop, StopAdvice};
use crate::da::DaModel;
use crate::error::{Error, Result};
use crate::rng::RandomStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSettings {
    pub variant: Variant,
    pub k_max: usize,
    pub n_samples: u64,
    pub alpha: f64,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub estimate: PowerSumEstimate,
    pub bounds: BoundReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub model: String,
    pub reference: String,
    pub settings: ExperimentSettings,
    pub rows: Vec<ExperimentRow>,
    /// Interval for `λ₁` from the largest `k`.
    pub lambda1_interval: (f64, f64),
    pub advice: StopAdvice,
    pub wall_time_s: f64,
}

/// Stream for run `k` of an experiment; sample `i` then uses its substream `i`.
pub fn run_stream(seed: u64, k: usize) -> RandomStream {
    RandomStream::new(seed, k as u64)
}

/// Independent estimation runs for `k = 1..=k_max` plus bounds for each `k`.
///
/// Output depends only on `(model, reference, variant, k_max, n, alpha, seed)`;
/// `workers` only sizes the thread pool.
pub fn run_power_sum_experiment(
    model: &dyn DaModel,
    reference: &ReferenceDensity,
    settings: &ExperimentSettings,
) -> Result<ExperimentReport> {
    if settings.k_max == 0 {
        return Err(Error::InvalidParameters("k_max must be >= 1".into()));
    }
    if settings.workers == 0 {
        return Err(Error::InvalidParameters("workers must be >= 1".into()));
    }
    check_compatible(model, settings.variant, reference)?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.workers)
        .build()
        .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?;

    let estimates = pool.install(|| {
        (1..=settings.k_max)
            .map(|k| {
                estimate_power_sum(
                    model,
                    settings.variant,
                    reference,
                    k,
                    settings.n_samples,
                    &run_stream(settings.seed, k),
                )
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut rows = Vec::with_capacity(estimates.len());
    for (i, est) in estimates.iter().enumerate() {
        let prev = if i == 0 { None } else { Some(&estimates[i - 1]) };
        rows.push(ExperimentRow {
            estimate: est.clone(),
            bounds: bounds_from_power_sums(est, prev, settings.alpha)?,
        });
    }
    let lambda1_interval = rows.last().expect("k_max >= 1").bounds.lambda1_interval;
    let advice = suggest_stop(&rows);
    Ok(ExperimentReport {
        model: model.name().to_string(),
        reference: reference.to_string(),
        settings: settings.clone(),
        rows,
        lambda1_interval,
        advice,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}
