//! The `dagap` command line.
//!
//! Exit codes: 0 on success (degeneracy warnings included), 1 when
//! `oracle-check` finds a violation, 2 on bad input or any other error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::config::{ModelKind, Overrides, RunConfig};
use crate::error::{Error, Result};
use crate::estimator::{estimate_power_sum, run_stream, PowerSumEstimate, ReferenceDensity, Variant};
use crate::models::GaussianToyModel;
use crate::oracle::check::run_oracle_suite;
use crate::runner::run_config;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "dagap", version, about = "Estimate eigenvalue power sums and the spectral gap of DA Markov chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a power-sum experiment and write JSON/CSV reports.
    Run(RunArgs),
    /// Check exact spectral identities and the estimator on random finite chains.
    OracleCheck(OracleArgs),
    /// Contrast a reference density with infinite weight variance against a good one.
    #[command(name = "demo-remark1")]
    DemoDegeneracy(DemoArgs),
    /// List built-in models, their capabilities and supported variants.
    Models,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML config file; flags override its values.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<ModelKind>,
    #[arg(long)]
    pub variant: Option<Variant>,
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long, short = 'n')]
    pub n_samples: Option<u64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub data_path: Option<PathBuf>,
    #[arg(long)]
    pub prior_g: Option<f64>,
    #[arg(long)]
    pub psi_dof: Option<f64>,
    #[arg(long)]
    pub omega_alpha: Option<f64>,
    #[arg(long)]
    pub omega_gamma: Option<f64>,
    #[arg(long)]
    pub output_json: Option<PathBuf>,
    #[arg(long)]
    pub output_csv: Option<PathBuf>,
    /// Leave worker count and wall time out of the JSON report so it is
    /// byte-identical across machines and worker counts.
    #[arg(long)]
    pub reproducible: bool,
    /// Print the JSON report to stdout instead of the table.
    #[arg(long)]
    pub json: bool,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            model: self.model,
            variant: self.variant,
            k_max: self.k_max,
            n_samples: self.n_samples,
            alpha: self.alpha,
            seed: self.seed,
            workers: self.workers,
            data_path: self.data_path.clone(),
            prior_g: self.prior_g,
            psi_dof: self.psi_dof,
            omega_alpha: self.omega_alpha,
            omega_gamma: self.omega_gamma,
            output_json: self.output_json.clone(),
            output_csv: self.output_csv.clone(),
        }
    }
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 6)]
    pub m: usize,
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples per estimator check; below 2 skips the estimator property.
    #[arg(long, default_value_t = 20_000)]
    pub n_samples: u64,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, short = 'n', default_value_t = 10_000)]
    pub n_samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub output_json: Option<PathBuf>,
}

/// Both halves of the degeneracy demo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub n_samples: u64,
    pub seed: u64,
    pub exact_s1: f64,
    pub pathological_reference: String,
    pub pathological: PowerSumEstimate,
    pub well_behaved_reference: String,
    pub well_behaved: PowerSumEstimate,
}

/// Parse `args` (program name first) and run. Output goes to the given
/// writers so tests can capture it.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(&args, out, err),
        Command::OracleCheck(args) => cmd_oracle_check(&args, out, err),
        Command::DemoDegeneracy(args) => cmd_demo_degeneracy(&args, out, err),
        Command::Models => cmd_models(out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_BAD_INPUT
        }
    }
}

fn cmd_run(args: &RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let config = RunConfig::resolve(args.config.as_deref(), &args.overrides())?;
    let doc = run_config(&config, !args.reproducible)?;
    for r in doc.rows.iter().filter(|r| r.degenerate) {
        writeln!(
            err,
            "warning: k = {} importance weights look degenerate (ess = {:.1}, max weight share = {:.3}, tail shape = {}); the standard error is unreliable",
            r.k,
            r.ess,
            r.max_weight_share,
            r.tail_shape.map_or("n/a".to_string(), |s| format!("{s:.3}"))
        )?;
    }
    if doc.rows.iter().any(|r| r.clamped) {
        writeln!(err, "warning: some power sum estimates are not above 1; bounds were set to zero")?;
    }
    doc.write_outputs(config.output.json.as_deref(), config.output.csv.as_deref())?;
    if args.json {
        write!(out, "{}", doc.to_json()?)?;
    } else {
        write!(out, "{}", doc.to_table())?;
    }
    Ok(EXIT_OK)
}

fn cmd_oracle_check(args: &OracleArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if args.m < 2 || args.n < 2 {
        return Err(Error::InvalidParameters("oracle-check needs m, n >= 2".into()));
    }
    if args.trials == 0 {
        writeln!(err, "warning: trials = 0, no property was checked (vacuous pass)")?;
    }
    let report = run_oracle_suite(args.m, args.n, args.trials, args.seed, args.n_samples)?;
    writeln!(
        out,
        "oracle-check: {} random {}x{} chains, seed {}",
        report.trials, args.m, args.n, args.seed
    )?;
    for p in &report.properties {
        writeln!(out, "{p}")?;
    }
    let passed = report.passed();
    writeln!(out, "{}", if passed { "all properties hold" } else { "property violations found" })?;
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn demo_estimate(reference: &ReferenceDensity, args: &DemoArgs) -> Result<PowerSumEstimate> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?;
    pool.install(|| {
        estimate_power_sum(
            &GaussianToyModel,
            Variant::Alg1,
            reference,
            1,
            args.n_samples,
            &run_stream(args.seed, 1),
        )
    })
}

pub fn demo_degeneracy(args: &DemoArgs) -> Result<DemoReport> {
    let bad = GaussianToyModel::pathological_omega();
    let good = GaussianToyModel::default_omega();
    Ok(DemoReport {
        n_samples: args.n_samples,
        seed: args.seed,
        exact_s1: 2.0,
        pathological_reference: bad.to_string(),
        pathological: demo_estimate(&bad, args)?,
        well_behaved_reference: good.to_string(),
        well_behaved: demo_estimate(&good, args)?,
    })
}

fn cmd_demo_degeneracy(args: &DemoArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let report = demo_degeneracy(args)?;
    writeln!(out, "Gaussian toy chain, k = 1, exact s_1 = 2, N = {}, seed {}", args.n_samples, args.seed)?;
    for (label, reference, est) in [
        ("omega = pi_V", &report.pathological_reference, &report.pathological),
        ("omega = N(0, 1)", &report.well_behaved_reference, &report.well_behaved),
    ] {
        writeln!(
            out,
            "{label:<16} s_hat {:.4}  se {:.4}  ess {:>9.1}  max share {:.4}  tail shape {}  degenerate {}",
            est.mean,
            est.std_err,
            est.ess,
            est.max_weight_share,
            est.tail_shape.map_or("n/a".to_string(), |s| format!("{s:.3}")),
            est.degenerate
        )?;
        if est.degenerate {
            writeln!(
                err,
                "warning: {reference}: importance weights are degenerate; the weight variance is likely infinite and the standard error is meaningless"
            )?;
        }
    }
    if let Some(path) = &args.output_json {
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        std::fs::write(path, text)?;
    }
    Ok(EXIT_OK)
}

fn cmd_models(out: &mut dyn Write) -> Result<i32> {
    let rows = [
        (ModelKind::GaussianToy, "log_pdf_v_given_u, log_pdf_u_given_v", "alg1, alg2", "N(0, 1) / N(0, 2)"),
        (
            ModelKind::Probit,
            "log_pdf_v_given_u, log_pdf_u_given_v, sandwich (w = 0)",
            "alg2, alg2S",
            "psi = t_dof(posterior mode, (observed information + Q)^-1)",
        ),
        (ModelKind::Regression, "log_pdf_v_given_u", "alg1", "omega = product of IG(alpha, gamma)"),
        (
            ModelKind::FiniteOracle,
            "log_pdf_v_given_u, log_pdf_u_given_v, sandwich",
            "alg1, alg1S, alg2, alg2S",
            "uniform on the grid",
        ),
    ];
    for (kind, caps, variants, reference) in rows {
        writeln!(out, "{kind}\n  capabilities: {caps}\n  variants: {variants}\n  reference: {reference}")?;
    }
    Ok(EXIT_OK)
}

impl clap::ValueEnum for ModelKind {
    fn value_variants<'a>() -> &'a [Self] {
        &ModelKind::ALL
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.as_str()))
    }
}

impl clap::ValueEnum for Variant {
    fn value_variants<'a>() -> &'a [Self] {
        &Variant::ALL
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.as_str()))
    }
}
