//! Property suite over random finite chains, run by `dagap oracle-check`.

use std::fmt;

use super::{random_finite_chain, FiniteDaModel};
use crate::error::Result;
use crate::estimator::{estimate_power_sum, run_stream, Variant};
use crate::rng::RandomStream;

/// Largest `k` for the trace identity and the estimator check.
pub const TRACE_K_MAX: usize = 6;
/// Largest `k` for the bound monotonicity check.
pub const BOUNDS_K_MAX: usize = 30;
pub const TRACE_TOL: f64 = 1e-9;
/// Slack for comparisons between bounds that are equal in exact arithmetic.
pub const BOUNDS_TOL: f64 = 1e-10;
/// Estimator means must fall within this many standard errors.
pub const ESTIMATOR_Z: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
    /// Largest discrepancy seen, in the property's own units.
    pub worst: f64,
}

impl PropertyResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            violations: 0,
            worst: 0.0,
        }
    }

    fn record(&mut self, discrepancy: f64, ok: bool) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
        }
        if discrepancy.is_nan() || discrepancy > self.worst {
            self.worst = discrepancy;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for PropertyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} checks {:>6}  violations {:>4}  worst {:.3e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checked,
            self.violations,
            self.worst
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheckReport {
    pub trials: usize,
    pub properties: Vec<PropertyResult>,
}

impl OracleCheckReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }
}

/// Run every property on `trials` random `m × n` chains.
///
/// Chain `t` is drawn from stream `t` of `seed`; its estimator runs use
/// `seed + 1 + t` so the two never share randomness.
pub fn run_oracle_suite(m: usize, n: usize, trials: usize, seed: u64, n_samples: u64) -> Result<OracleCheckReport> {
    let mut trace = PropertyResult::new("trace identity");
    let mut spectrum = PropertyResult::new("spectrum in [0, 1]");
    let mut reversible = PropertyResult::new("reversibility");
    let mut monotone_u = PropertyResult::new("u_k non-increasing");
    let mut monotone_l = PropertyResult::new("l_k non-decreasing");
    let mut sandwiched = PropertyResult::new("l_k <= lambda_1 <= u_k");
    let mut estimator = PropertyResult::new("estimator within 4 se");

    for t in 0..trials {
        let chain = random_finite_chain(m, n, &mut RandomStream::new(seed, t as u64))?;
        let s = chain.exact_spectrum();

        for k in 1..=TRACE_K_MAX {
            let d = (chain.exact_power_sum_via_trace(k) - s.power_sum(k)).abs();
            trace.record(d, d < TRACE_TOL);
        }

        let top = (s.eigenvalues[0] - 1.0).abs();
        let out = s.eigenvalues.iter().map(|l| (l - 1.0).max(0.0)).fold(top, f64::max);
        spectrum.record(out, out < 1e-9);

        let p = chain.transition();
        let pi = chain.pi_u();
        let mut asym: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                asym = asym.max((pi[i] * p[(i, j)] - pi[j] * p[(j, i)]).abs());
            }
        }
        reversible.record(asym, asym < 1e-12);

        let lambda1 = s.lambda1();
        let (us, ls) = (s.upper_bounds(BOUNDS_K_MAX), s.lower_bounds(BOUNDS_K_MAX));
        for k in 1..BOUNDS_K_MAX {
            let du = us[k] - us[k - 1];
            monotone_u.record(du.max(0.0), du <= BOUNDS_TOL);
            let dl = ls[k - 1] - ls[k];
            monotone_l.record(dl.max(0.0), dl <= BOUNDS_TOL);
        }
        for k in 0..BOUNDS_K_MAX {
            let gap = (ls[k] - lambda1).max(lambda1 - us[k]).max(0.0);
            sandwiched.record(gap, gap <= BOUNDS_TOL);
        }

        if n_samples >= 2 {
            let model = FiniteDaModel::new(chain.clone());
            let omega = model.uniform_omega();
            let run_seed = seed.wrapping_add(1 + t as u64);
            for k in 1..=TRACE_K_MAX {
                let est = estimate_power_sum(&model, Variant::Alg1, &omega, k, n_samples, &run_stream(run_seed, k))?;
                let exact = chain.exact_power_sum_via_trace(k);
                let z = (est.mean - exact).abs() / est.std_err;
                estimator.record(z, z <= ESTIMATOR_Z);
            }
        }
    }

    let mut properties = vec![trace, spectrum, reversible, monotone_u, monotone_l, sandwiched];
    if n_samples >= 2 {
        properties.push(estimator);
    }
    Ok(OracleCheckReport { trials, properties })
}
