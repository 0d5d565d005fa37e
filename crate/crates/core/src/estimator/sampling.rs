//! Exact draws from the auxiliary joint densities η (V-side reference) and
//! ζ (U-side reference) whose importance weights average to `s_k`.

use super::reference::{ReferenceDensity, Space};
use crate::da::{advance, require_sandwich, ChainState, DaModel};
use crate::error::{Error, Result};
use crate::rng::RandomStream;

fn check_space(reference: &ReferenceDensity, expected: Space) -> Result<()> {
    if reference.space() == expected {
        Ok(())
    } else {
        Err(Error::ReferenceSpace {
            expected: expected.label(),
            found: reference.space().label(),
        })
    }
}

fn run_steps(
    model: &dyn DaModel,
    start: Vec<f64>,
    steps: usize,
    rng: &mut RandomStream,
    sandwich: bool,
) -> Result<Vec<f64>> {
    let mut u = ChainState(start);
    for _ in 0..steps {
        u = advance(model, &u, rng, sandwich)?;
    }
    Ok(u.into_inner())
}

/// `(U*, V*) ~ η`: `V* ~ ω`, optionally `V' ~ s(V*, ·)`, `U' ~ π_{U|V}(·|V')`,
/// then `k − 1` (sandwich) DA steps from `U'`.
///
/// Stream consumption order: ω, sandwich move, `π_{U|V}`, chain steps.
pub fn draw_eta_sample(
    model: &dyn DaModel,
    omega: &ReferenceDensity,
    k: usize,
    rng: &mut RandomStream,
    sandwich: bool,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_space(omega, Space::V)?;
    if k == 0 {
        return Err(Error::InvalidParameters("k must be >= 1".into()));
    }
    if sandwich {
        require_sandwich(model)?;
    }
    let v_star = omega.sample(rng)?;
    let u_prime = if sandwich {
        let v_prime = model.sandwich_step(&v_star, rng)?;
        model.sample_u_given_v(&v_prime, rng)?
    } else {
        model.sample_u_given_v(&v_star, rng)?
    };
    let u_star = run_steps(model, u_prime, k - 1, rng, sandwich)?;
    Ok((u_star, v_star))
}

/// `(U*, V*) ~ ζ`: `U* ~ ψ`, `U'` after `k − 1` (sandwich) DA steps,
/// `V' ~ π_{V|U}(·|U')`, and `V* = V'` or `V* ~ s(V', ·)`.
///
/// Stream consumption order: ψ, chain steps, `π_{V|U}`, sandwich move.
pub fn draw_zeta_sample(
    model: &dyn DaModel,
    psi: &ReferenceDensity,
    k: usize,
    rng: &mut RandomStream,
    sandwich: bool,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_space(psi, Space::U)?;
    if k == 0 {
        return Err(Error::InvalidParameters("k must be >= 1".into()));
    }
    if sandwich {
        require_sandwich(model)?;
    }
    let u_star = psi.sample(rng)?;
    let u_prime = run_steps(model, u_star.clone(), k - 1, rng, sandwich)?;
    let v_prime = model.sample_v_given_u(&u_prime, rng)?;
    let v_star = if sandwich {
        model.sandwich_step(&v_prime, rng)?
    } else {
        v_prime
    };
    Ok((u_star, v_star))
}
