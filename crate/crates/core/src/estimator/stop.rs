//! Advisory stopping rule for the choice of `k`.
//!
//! Larger `k` narrows `u_k − l_k` but inflates the delta-method errors of
//! both bounds. The rule recommends stopping once `s_k − 1` is clearly
//! below one half and the relative interval widths have stopped shrinking.

use serde::{Deserialize, Serialize};

use super::experiment::ExperimentRow;

/// `s_k − 1 + 2·se` must fall below this before stopping is suggested.
pub const EXCESS_THRESHOLD: f64 = 0.5;
/// A relative width counts as shrinking when it drops below this fraction of
/// its value at the previous `k`.
pub const SHRINK_FACTOR: f64 = 0.95;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopAdvice {
    #[serde(rename = "continue")]
    pub continue_: bool,
    pub reason: String,
}

fn relative_width(ci: (f64, f64), point: f64) -> Option<f64> {
    (point > 0.0).then(|| (ci.1 - ci.0) / point)
}

fn shrinking(now: Option<f64>, before: Option<f64>) -> bool {
    match (now, before) {
        (Some(n), Some(b)) => n < SHRINK_FACTOR * b,
        _ => false,
    }
}

/// Recommend whether to run the next `k`. Advisory only.
pub fn suggest_stop(rows: &[ExperimentRow]) -> StopAdvice {
    let Some(last) = rows.last() else {
        return StopAdvice {
            continue_: true,
            reason: "no completed k yet".into(),
        };
    };
    let est = &last.estimate;
    if last.bounds.clamped {
        return StopAdvice {
            continue_: true,
            reason: format!(
                "s_{} estimate {:.4} is not above 1; rerun with a larger sample size",
                est.k, est.mean
            ),
        };
    }
    let excess = est.mean - 1.0 + 2.0 * est.std_err;
    if excess >= EXCESS_THRESHOLD {
        return StopAdvice {
            continue_: true,
            reason: format!(
                "s_{k} - 1 + 2 se = {excess:.4} is not yet below {EXCESS_THRESHOLD}; increase k",
                k = est.k
            ),
        };
    }
    if let [.., prev, last] = rows {
        if !prev.bounds.clamped {
            let b = &last.bounds;
            let p = &prev.bounds;
            let u_shrinks = shrinking(relative_width(b.u_ci, b.u_point), relative_width(p.u_ci, p.u_point));
            let l_shrinks = shrinking(relative_width(b.l_ci, b.l_point), relative_width(p.l_ci, p.l_point));
            if u_shrinks || l_shrinks {
                return StopAdvice {
                    continue_: true,
                    reason: format!("relative interval widths still shrinking at k = {}", est.k),
                };
            }
        }
    }
    StopAdvice {
        continue_: false,
        reason: format!(
            "s_{k} - 1 + 2 se = {excess:.4} < {EXCESS_THRESHOLD} and interval widths no longer shrink",
            k = est.k
        ),
    }
}
