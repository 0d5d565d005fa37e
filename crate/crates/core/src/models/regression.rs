//! Linear regression with scale-mixture-of-normals errors, `d = 1`.
//!
//! Errors have density `∫ √u φ(√u ε) h(u) du` with mixing density
//! `h(u) ∝ u^{-2} e^{-1/(8u)}` (scaled Laplace errors) and the prior on
//! `(β, Σ)` is `1/Σ`. U is `(β, Σ)` stored as `[β₁, …, β_p, Σ]`, V is the
//! vector of mixing weights `z`.
//!
//! Given `(β, Σ)`, `zᵢ ~ GIG(−1/2, 1/4, rᵢ/Σ)` with `rᵢ = (yᵢ − xᵢᵀβ)²`.
//! Given `z`, `Σ ~ IG((n−p)/2, SSR_z/2)` and `β | Σ ~ N(β̂_z, Σ (XᵀD_zX)⁻¹)`.

use nalgebra::{DMatrix, DVector};

use super::data::numerical_rank;
use crate::da::{Capabilities, DaModel};
use crate::error::{invalid, Error, Result};
use crate::estimator::{Density, ReferenceDensity, Space};
use crate::kernels::multivariate::standard_normal_vector;
use crate::kernels::{gig, sample_gamma, DistributionSpec};
use crate::rng::RandomStream;

/// `χ` of the latent GIG conditional; `2 × 1/8` from the mixing density.
const GIG_CHI: f64 = 0.25;
/// Floor for squared residuals inside the GIG rate.
pub const RESIDUAL_FLOOR: f64 = 1e-300;

/// Default ω factor `z^{-3/2} e^{-1/(32 z)}`, i.e. IG(1/2, 1/32).
pub const DEFAULT_OMEGA_ALPHA: f64 = 0.5;
pub const DEFAULT_OMEGA_GAMMA: f64 = 1.0 / 32.0;

#[derive(Debug, Clone)]
pub struct RegressionModel {
    x: DMatrix<f64>,
    y: DVector<f64>,
}

impl RegressionModel {
    /// Requires `n ≥ p + 1` and `(X : y)` of full column rank, which together
    /// with the Laplace mixing density make the posterior proper.
    pub fn new(x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        let (n, p) = x.shape();
        if p == 0 {
            return Err(invalid("design matrix has no columns"));
        }
        if y.len() != n {
            return Err(invalid(format!("y has {} entries but X has {n} rows", y.len())));
        }
        if n < p + 1 {
            return Err(invalid(format!("need n >= p + 1, got n = {n}, p = {p}")));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("data have non-finite entries"));
        }
        let xy = DMatrix::from_fn(n, p + 1, |i, j| if j < p { x[(i, j)] } else { y[i] });
        if numerical_rank(&xy) < p + 1 {
            return Err(Error::Rank(format!("(X : y) ({n} x {}) is not of full column rank", p + 1)));
        }
        Ok(Self { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    /// ω = product of `n` IG(α, γ) densities, `ωᵢ(z) ∝ z^{-α-1} e^{-γ/z}`.
    /// The weight variance is finite for `0 < α < 3/4`, `0 < γ < 3/64`;
    /// values outside that box are rejected.
    pub fn omega(&self, alpha: f64, gamma: f64) -> Result<ReferenceDensity> {
        if !(alpha > 0.0 && alpha < 0.75) || !(gamma > 0.0 && gamma < 3.0 / 64.0) {
            return Err(invalid(format!(
                "omega needs 0 < alpha < 3/4 and 0 < gamma < 3/64, got alpha = {alpha}, gamma = {gamma}"
            )));
        }
        let factor = DistributionSpec::inverse_gamma(alpha, gamma)?;
        ReferenceDensity::new(Space::V, Density::Product { factor, n: self.n() })
    }

    pub fn default_omega(&self) -> ReferenceDensity {
        self.omega(DEFAULT_OMEGA_ALPHA, DEFAULT_OMEGA_GAMMA)
            .expect("default omega parameters are valid")
    }

    fn split_u<'a>(&self, u: &'a [f64]) -> Result<(&'a [f64], f64)> {
        if u.len() != self.p() + 1 {
            return Err(invalid(format!("state has {} entries, expected p + 1 = {}", u.len(), self.p() + 1)));
        }
        let sigma = u[self.p()];
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(invalid(format!("Sigma must be finite and > 0, got {sigma}")));
        }
        Ok((&u[..self.p()], sigma))
    }

    /// GIG rates `max(rᵢ, floor) / Σ`.
    fn gig_rates(&self, u: &[f64]) -> Result<Vec<f64>> {
        let (beta, sigma) = self.split_u(u)?;
        let fitted = &self.x * DVector::from_column_slice(beta);
        Ok((0..self.n())
            .map(|i| {
                let r = (self.y[i] - fitted[i]).powi(2);
                r.max(RESIDUAL_FLOOR) / sigma
            })
            .collect())
    }

    /// Weighted least squares under weights `z`: the Cholesky factor of
    /// `XᵀD_zX`, `β̂_z` and `SSR_z`.
    pub fn weighted_fit(&self, z: &[f64]) -> Result<(DMatrix<f64>, DVector<f64>, f64)> {
        if z.len() != self.n() {
            return Err(invalid(format!("z has {} entries, expected {}", z.len(), self.n())));
        }
        if z.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(invalid("mixing weights must be finite and > 0"));
        }
        let (n, p) = self.x.shape();
        let xw = DMatrix::from_fn(n, p, |i, j| self.x[(i, j)] * z[i]);
        let xtdx = xw.transpose() * &self.x;
        let xtdy = xw.transpose() * &self.y;
        let chol = xtdx
            .cholesky()
            .ok_or_else(|| invalid("XᵀDX is not positive definite"))?;
        let beta = chol.solve(&xtdy);
        let resid = &self.y - &self.x * &beta;
        let ssr = (0..n).map(|i| z[i] * resid[i] * resid[i]).sum();
        Ok((chol.unpack(), beta, ssr))
    }
}

impl DaModel for RegressionModel {
    fn name(&self) -> &str {
        "regression"
    }

    fn u_dim(&self) -> usize {
        self.p() + 1
    }

    fn v_dim(&self) -> usize {
        self.n()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            log_pdf_v_given_u: true,
            log_pdf_u_given_v: false,
            sandwich: false,
        }
    }

    fn sample_v_given_u(&self, u: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
        Ok(self
            .gig_rates(u)?
            .into_iter()
            .map(|psi| gig::sample(GIG_CHI, psi, rng))
            .collect())
    }

    /// Draws Σ first, then β given Σ.
    fn sample_u_given_v(&self, v: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
        let (lower, beta_hat, ssr) = self.weighted_fit(v)?;
        let shape = 0.5 * (self.n() - self.p()) as f64;
        let sigma = 1.0 / sample_gamma(shape, 0.5 * ssr, rng);
        let e = standard_normal_vector(self.p(), rng);
        let noise = lower.tr_solve_lower_triangular(&e).expect("positive diagonal") * sigma.sqrt();
        let mut u: Vec<f64> = (beta_hat + noise).as_slice().to_vec();
        u.push(sigma);
        Ok(u)
    }

    fn log_pdf_v_given_u(&self, v: &[f64], u: &[f64]) -> Result<f64> {
        if v.len() != self.n() {
            return Err(invalid(format!("z has {} entries, expected {}", v.len(), self.n())));
        }
        Ok(self
            .gig_rates(u)?
            .into_iter()
            .zip(v)
            .map(|(psi, &z)| gig::log_pdf(z, GIG_CHI, psi))
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::fixture::embedded_regression_fixture;

    #[test]
    fn fixture_model_builds() {
        let (x, y) = embedded_regression_fixture();
        let m = RegressionModel::new(x, y).unwrap();
        assert_eq!(m.u_dim(), 7);
        assert_eq!(m.v_dim(), 10);
    }

    #[test]
    fn rejects_too_few_rows_and_rank_deficiency() {
        let x = DMatrix::from_column_slice(1, 1, &[1.0]);
        assert!(RegressionModel::new(x, DVector::from_element(1, 1.0)).is_err());
        // y lies in the column space of X
        let x = DMatrix::from_column_slice(3, 1, &[1.0, 2.0, 3.0]);
        let y = DVector::from_column_slice(&[2.0, 4.0, 6.0]);
        assert!(matches!(RegressionModel::new(x, y), Err(Error::Rank(_))));
    }

    #[test]
    fn unit_weights_give_ordinary_least_squares() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 1.0, 1.0, 1.0, 2.0]);
        let y = DVector::from_column_slice(&[1.0, 2.0, 4.0]);
        let m = RegressionModel::new(x, y).unwrap();
        let (_, beta, ssr) = m.weighted_fit(&[1.0, 1.0, 1.0]).unwrap();
        assert!((beta[0] - 5.0 / 6.0).abs() < 1e-12);
        assert!((beta[1] - 1.5).abs() < 1e-12);
        assert!((ssr - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn v_density_matches_inverse_gaussian() {
        // r = 4, Σ = 1: each coordinate is inverse Gaussian with mean 1/4, shape 1/4
        let x = DMatrix::from_column_slice(2, 1, &[1.0, 1.0]);
        let y = DVector::from_column_slice(&[2.0, -2.0]);
        let m = RegressionModel::new(x, y).unwrap();
        let z: f64 = 0.3;
        let (mu, lam) = (0.25_f64, 0.25_f64);
        let ig = 0.5 * (lam / (2.0 * std::f64::consts::PI * z.powi(3))).ln() - lam * (z - mu).powi(2) / (2.0 * mu * mu * z);
        let lp = m.log_pdf_v_given_u(&[z, z], &[0.0, 1.0]).unwrap();
        assert!((lp - 2.0 * ig).abs() < 1e-12, "{lp} vs {}", 2.0 * ig);
    }

    #[test]
    fn omega_parameter_box() {
        let (x, y) = embedded_regression_fixture();
        let m = RegressionModel::new(x, y).unwrap();
        assert!(m.omega(0.75, 0.01).is_err());
        assert!(m.omega(0.5, 3.0 / 64.0).is_err());
        assert_eq!(m.default_omega().dim(), 10);
    }

    #[test]
    fn rejects_non_positive_sigma() {
        let (x, y) = embedded_regression_fixture();
        let m = RegressionModel::new(x, y).unwrap();
        let mut rng = RandomStream::new(0, 0);
        assert!(m.sample_v_given_u(&[0.0; 7][..6].iter().copied().chain([0.0]).collect::<Vec<_>>(), &mut rng).is_err());
    }
}
