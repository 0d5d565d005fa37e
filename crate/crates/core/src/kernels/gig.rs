//! Generalized inverse Gaussian at index λ = −1/2.
//!
//! GIG(−1/2, χ, ψ) has kernel `x^{-3/2} exp(-(χ/x + ψx)/2)` and is the
//! inverse-Gaussian law with mean `sqrt(χ/ψ)` and shape `χ`.

use rand_distr::{Distribution, StandardNormal};

use super::special::LN_SQRT_2PI;
use crate::rng::RandomStream;

/// The only GIG index supported.
pub const LAMBDA: f64 = -0.5;

/// Michael–Schucany–Haas transformation sampler.
pub fn sample(chi: f64, psi: f64, rng: &mut RandomStream) -> f64 {
    let mu = (chi / psi).sqrt();
    let nu: f64 = StandardNormal.sample(rng);
    let t = mu * nu * nu / (2.0 * chi);
    // μ(1 + t − sqrt(t² + 2t)) written without cancellation
    let root = mu / (1.0 + t + (t * (t + 2.0)).sqrt());
    if rng.uniform_open() * (mu + root) <= mu {
        root
    } else {
        mu * (mu / root)
    }
}

pub fn log_pdf(x: f64, chi: f64, psi: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    0.5 * chi.ln() - LN_SQRT_2PI - 1.5 * x.ln() - 0.5 * (chi / x + psi * x) + (chi * psi).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_at_mean_matches_bessel_closed_form() {
        // χ = 1/4, ψ = 4: mean 1/4. With K_{1/2}(t) = sqrt(π/(2t)) e^{-t},
        // the normalizer (ψ/χ)^{-1/4} / (2 K_{-1/2}(sqrt(χψ))) reduces to
        // sqrt(χ/(2π)) e^{sqrt(χψ)}, and at x = 1/4:
        // ln f = ½ln(1/(8π)) − 1.5 ln(1/4) − ½(1 + 1) + 1.
        let expected = 0.5 * (1.0 / (8.0 * std::f64::consts::PI)).ln() - 1.5 * 0.25f64.ln();
        assert!((log_pdf(0.25, 0.25, 4.0) - expected).abs() < 1e-12);
    }

    #[test]
    fn huge_mean_degenerates_to_levy() {
        // ψ -> 0 gives the Lévy law with scale χ, which has infinite mean
        // but median χ / (2 erfc⁻¹(1/2)²) ≈ 2.198 χ.
        let mut rng = RandomStream::new(3, 0);
        let mut xs: Vec<f64> = (0..20_001).map(|_| sample(1.0, 1e-300, &mut rng)).collect();
        assert!(xs.iter().all(|x| x.is_finite() && *x > 0.0));
        xs.sort_by(f64::total_cmp);
        let median = xs[10_000];
        assert!((median / 2.198 - 1.0).abs() < 0.05, "median {median}");
    }
}
