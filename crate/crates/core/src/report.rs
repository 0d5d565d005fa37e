//! Serialized experiment reports: a JSON document and a flat CSV table.
//!
//! The JSON layout is described by `schema/report.schema.json`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{OmegaConfig, PriorConfig, PsiConfig, RunConfig};
use crate::da::Capabilities;
use crate::error::Result;
use crate::estimator::{ExperimentReport, StopAdvice};
use crate::oracle::SpectralSummary;

/// Bumped whenever the JSON layout changes.
pub const REPORT_FORMAT: u32 = 1;

pub const CSV_HEADER: &str = "k,s_hat,std_err,l_hat,u_hat,l_ci_lo,l_ci_hi,u_ci_lo,u_ci_hi,ess,degenerate";

/// Everything needed to regenerate a report except the worker count and
/// output paths, which do not affect the numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEcho {
    pub model: String,
    pub variant: String,
    pub k_max: usize,
    pub n_samples: u64,
    pub alpha: f64,
    pub seed: u64,
    pub data_path: Option<PathBuf>,
    pub prior: PriorConfig,
    pub psi: PsiConfig,
    pub omega: OmegaConfig,
}

impl From<&RunConfig> for ConfigEcho {
    fn from(c: &RunConfig) -> Self {
        Self {
            model: c.model.to_string(),
            variant: c.variant().to_string(),
            k_max: c.k_max,
            n_samples: c.n_samples,
            alpha: c.alpha,
            seed: c.seed,
            data_path: c.data_path.clone(),
            prior: c.prior.clone(),
            psi: c.psi.clone(),
            omega: c.omega.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelInfo {
    pub name: String,
    pub u_dim: usize,
    pub v_dim: usize,
    pub capabilities: Capabilities,
    /// Human-readable ω or ψ.
    pub reference: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportRow {
    pub k: usize,
    pub s_hat: f64,
    pub std_err: f64,
    pub l_hat: f64,
    pub u_hat: f64,
    pub l_ci: [f64; 2],
    pub u_ci: [f64; 2],
    pub lambda1_interval: [f64; 2],
    pub ess: f64,
    pub max_weight_share: f64,
    pub tail_shape: Option<f64>,
    pub degenerate: bool,
    pub clamped: bool,
}

/// Known spectrum of the operator being estimated, when available.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactSpectrum {
    pub lambda1: f64,
    pub power_sums: Vec<f64>,
    pub upper_bounds: Vec<f64>,
    pub lower_bounds: Vec<f64>,
}

impl ExactSpectrum {
    pub fn from_summary(s: &SpectralSummary, k_max: usize) -> Self {
        Self {
            lambda1: s.lambda1(),
            power_sums: s.power_sums(k_max),
            upper_bounds: s.upper_bounds(k_max),
            lower_bounds: s.lower_bounds(k_max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Runtime {
    pub workers: usize,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub format: u32,
    pub version: String,
    pub config: ConfigEcho,
    pub model: ModelInfo,
    pub rows: Vec<ReportRow>,
    pub lambda1_interval: [f64; 2],
    pub advice: StopAdvice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactSpectrum>,
    /// Omitted in reproducible mode so reports are byte-identical across
    /// worker counts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime: Option<Runtime>,
}

impl ReportDocument {
    pub fn new(
        config: &RunConfig,
        model: ModelInfo,
        report: &ExperimentReport,
        exact: Option<ExactSpectrum>,
        include_runtime: bool,
    ) -> Self {
        let rows = report
            .rows
            .iter()
            .map(|r| ReportRow {
                k: r.estimate.k,
                s_hat: r.estimate.mean,
                std_err: r.estimate.std_err,
                l_hat: r.bounds.l_point,
                u_hat: r.bounds.u_point,
                l_ci: [r.bounds.l_ci.0, r.bounds.l_ci.1],
                u_ci: [r.bounds.u_ci.0, r.bounds.u_ci.1],
                lambda1_interval: [r.bounds.lambda1_interval.0, r.bounds.lambda1_interval.1],
                ess: r.estimate.ess,
                max_weight_share: r.estimate.max_weight_share,
                tail_shape: r.estimate.tail_shape,
                degenerate: r.estimate.degenerate,
                clamped: r.bounds.clamped,
            })
            .collect();
        Self {
            format: REPORT_FORMAT,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: ConfigEcho::from(config),
            model,
            rows,
            lambda1_interval: [report.lambda1_interval.0, report.lambda1_interval.1],
            advice: report.advice.clone(),
            exact,
            runtime: include_runtime.then_some(Runtime {
                workers: report.settings.workers,
                wall_time_s: report.wall_time_s,
            }),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// CSV table with [`CSV_HEADER`], 17 significant digits, LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let nums = [
                r.s_hat, r.std_err, r.l_hat, r.u_hat, r.l_ci[0], r.l_ci[1], r.u_ci[0], r.u_ci[1], r.ess,
            ];
            let _ = write!(out, "{}", r.k);
            for v in nums {
                let _ = write!(out, ",{v:.16e}");
            }
            let _ = writeln!(out, ",{}", r.degenerate);
        }
        out
    }

    pub fn any_degenerate(&self) -> bool {
        self.rows.iter().any(|r| r.degenerate)
    }

    /// Write whichever outputs are configured.
    pub fn write_outputs(&self, json: Option<&Path>, csv: Option<&Path>) -> Result<()> {
        if let Some(path) = json {
            std::fs::write(path, self.to_json()?)?;
        }
        if let Some(path) = csv {
            std::fs::write(path, self.to_csv())?;
        }
        Ok(())
    }

    /// Plain-text table for the terminal.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "model {} / {} / N = {} / seed {}\n{:>3} {:>12} {:>10} {:>8} {:>8} {:>18} {:>18} {:>10}\n",
            self.config.model,
            self.config.variant,
            self.config.n_samples,
            self.config.seed,
            "k",
            "s_hat",
            "std_err",
            "l_hat",
            "u_hat",
            "l_ci",
            "u_ci",
            "ess"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>3} {:>12.6} {:>10.6} {:>8.4} {:>8.4} {:>18} {:>18} {:>10.1}{}",
                r.k,
                r.s_hat,
                r.std_err,
                r.l_hat,
                r.u_hat,
                format!("({:.4}, {:.4})", r.l_ci[0], r.l_ci[1]),
                format!("({:.4}, {:.4})", r.u_ci[0], r.u_ci[1]),
                r.ess,
                if r.degenerate { "  DEGENERATE" } else { "" }
            );
        }
        let _ = writeln!(
            out,
            "lambda_1 in ({:.4}, {:.4}) at level {}",
            self.lambda1_interval[0],
            self.lambda1_interval[1],
            1.0 - self.config.alpha
        );
        let _ = writeln!(
            out,
            "advice: {} ({})",
            if self.advice.continue_ { "continue" } else { "stop" },
            self.advice.reason
        );
        out
    }
}
