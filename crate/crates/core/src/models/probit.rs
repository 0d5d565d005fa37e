//! Bayesian probit regression with the Albert–Chib latent-variable chain.
//!
//! Prior `β ~ N_p(Q⁻¹w, Q⁻¹)`. With `A = XᵀX + Q`:
//! `β | z ~ N(A⁻¹(w + Xᵀz), A⁻¹)` and `zᵢ | β ~ N(xᵢᵀβ, 1)` truncated to the
//! half-line picked by `yᵢ`. U is `β` (length p), V is `z` (length n).

use nalgebra::{DMatrix, DVector};

use super::data::numerical_rank;
use crate::da::{Capabilities, DaModel};
use crate::error::{invalid, Error, Result};
use crate::estimator::{Density, ReferenceDensity, Space};
use crate::kernels::multivariate::standard_normal_vector;
use crate::kernels::special::{inv_mills, log_ndtr, log_phi, LN_SQRT_2PI};
use crate::kernels::{sample_gamma, truncnorm, CholeskyFactor, DistributionSpec, Side};
use crate::rng::RandomStream;

/// Degrees of freedom of the default ψ.
pub const DEFAULT_PSI_DOF: f64 = 30.0;
/// Prior scaling used with the lupus data, `Q = XᵀX / g`.
pub const DEFAULT_G: f64 = 3.499_999;

const NEWTON_TOL: f64 = 1e-10;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone)]
pub struct ProbitModel {
    x: DMatrix<f64>,
    sides: Vec<Side>,
    q: DMatrix<f64>,
    w: DVector<f64>,
    /// Lower Cholesky factor of `A = XᵀX + Q`.
    a_lower: DMatrix<f64>,
    a_half_log_det: f64,
    beta_hat: DVector<f64>,
}

/// `Q = XᵀX / g`
pub fn g_prior_precision(x: &DMatrix<f64>, g: f64) -> Result<DMatrix<f64>> {
    if !(g.is_finite() && g > 0.0) {
        return Err(invalid(format!("g must be finite and > 0, got {g}")));
    }
    Ok(x.transpose() * x / g)
}

impl ProbitModel {
    /// `y` entries must be exactly 0 or 1.
    pub fn new(x: DMatrix<f64>, y: &[f64], q: DMatrix<f64>, w: DVector<f64>) -> Result<Self> {
        let (n, p) = x.shape();
        if n == 0 || p == 0 {
            return Err(invalid("design matrix is empty"));
        }
        if y.len() != n {
            return Err(invalid(format!("y has {} entries but X has {n} rows", y.len())));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(invalid("design matrix has non-finite entries"));
        }
        let sides = y
            .iter()
            .map(|&v| {
                if v == 1.0 {
                    Ok(Side::Positive)
                } else if v == 0.0 {
                    Ok(Side::Negative)
                } else {
                    Err(invalid(format!("probit responses must be 0 or 1, got {v}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if numerical_rank(&x) < p {
            return Err(Error::Rank(format!("X ({n} x {p}) is not of full column rank")));
        }
        if q.shape() != (p, p) || w.len() != p {
            return Err(invalid(format!("Q must be {p} x {p} and w of length {p}")));
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(invalid("w has non-finite entries"));
        }
        CholeskyFactor::new(&q).map_err(|_| invalid("Q must be symmetric positive definite"))?;
        let a = x.transpose() * &x + &q;
        let a_factor = CholeskyFactor::new(&a)?;
        let mut model = Self {
            x,
            sides,
            q,
            w,
            a_lower: a_factor.lower().clone(),
            a_half_log_det: a_factor.half_log_det(),
            beta_hat: DVector::zeros(p),
        };
        model.beta_hat = model.newton(true, "the posterior mode")?;
        Ok(model)
    }

    /// Prior `Q = XᵀX / g`, `w = 0`.
    pub fn with_g_prior(x: DMatrix<f64>, y: &[f64], g: f64) -> Result<Self> {
        let q = g_prior_precision(&x, g)?;
        let p = x.ncols();
        Self::new(x, y, q, DVector::zeros(p))
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

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn w(&self) -> &DVector<f64> {
        &self.w
    }

    pub fn posterior_mode(&self) -> &DVector<f64> {
        &self.beta_hat
    }

    /// Signs `sᵢ = 2yᵢ − 1`.
    fn sign(&self, i: usize) -> f64 {
        self.sides[i].sign()
    }

    /// Log-likelihood (plus log-prior when `with_prior`) with gradient and
    /// negated Hessian.
    fn objective(&self, beta: &DVector<f64>, with_prior: bool) -> (f64, DVector<f64>, DMatrix<f64>) {
        let p = self.p();
        let eta = &self.x * beta;
        let mut value = 0.0;
        let mut grad = DVector::zeros(p);
        let mut info = DMatrix::zeros(p, p);
        for i in 0..self.n() {
            let s = self.sign(i);
            let t = s * eta[i];
            let lam = inv_mills(t);
            value += log_ndtr(t);
            let xi = self.x.row(i).transpose();
            grad.axpy(s * lam, &xi, 1.0);
            info.ger(lam * (t + lam), &xi, &xi, 1.0);
        }
        if with_prior {
            let qb = &self.q * beta;
            value += -0.5 * beta.dot(&qb) + self.w.dot(beta);
            grad += &self.w - qb;
            info += &self.q;
        }
        (value, grad, info)
    }

    /// Newton ascent with step halving.
    fn newton(&self, with_prior: bool, what: &'static str) -> Result<DVector<f64>> {
        let no_conv = || Error::NoConvergence {
            what,
            iterations: NEWTON_MAX_ITER,
        };
        let mut beta = DVector::zeros(self.p());
        let (mut value, mut grad, mut info) = self.objective(&beta, with_prior);
        for _ in 0..NEWTON_MAX_ITER {
            let step = info.clone().cholesky().ok_or_else(no_conv)?.solve(&grad);
            // Under separation the gradient vanishes numerically while the
            // Newton step stays large, so both must be small.
            if grad.norm() < NEWTON_TOL && step.norm() < 1e-6 * (1.0 + beta.norm()) {
                return Ok(beta);
            }
            let mut scale = 1.0;
            loop {
                let cand = &beta + &step * scale;
                let next = self.objective(&cand, with_prior);
                // Accept equal values too: near the optimum the objective is flat
                // to machine precision while the gradient still shrinks.
                if next.0.is_finite() && next.0 >= value - 1e-12 * value.abs().max(1.0) {
                    beta = cand;
                    (value, grad, info) = next;
                    break;
                }
                scale *= 0.5;
                if scale < 1e-10 {
                    return Err(no_conv());
                }
            }
        }
        Err(no_conv())
    }

    /// Maximum likelihood estimate (no prior). Fails under separation.
    pub fn mle(&self) -> Result<DVector<f64>> {
        self.newton(false, "the maximum likelihood estimate")
    }

    /// Observed information of the likelihood at the MLE, `Σ̂⁻¹`.
    pub fn observed_information(&self) -> Result<DMatrix<f64>> {
        let mle = self.mle()?;
        Ok(self.objective(&mle, false).2)
    }

    /// ψ = multivariate t with `dof` degrees of freedom, location `β̂` (the
    /// posterior mode) and scale `(Σ̂⁻¹ + Q)⁻¹`.
    pub fn psi(&self, dof: f64) -> Result<ReferenceDensity> {
        if !(dof.is_finite() && dof > 0.0) {
            return Err(invalid(format!("psi dof must be finite and > 0, got {dof}")));
        }
        let precision = self.observed_information()? + &self.q;
        let precision = (&precision + precision.transpose()) * 0.5;
        let scale = precision
            .cholesky()
            .ok_or_else(|| invalid("psi precision is not positive definite"))?
            .inverse();
        let scale = (&scale + scale.transpose()) * 0.5;
        let spec = DistributionSpec::multivariate_t(self.beta_hat.clone(), &scale, dof)?;
        ReferenceDensity::new(Space::U, Density::Spec(spec))
    }

    fn check_beta(&self, u: &[f64]) -> Result<DVector<f64>> {
        if u.len() != self.p() {
            return Err(invalid(format!("beta has {} entries, expected {}", u.len(), self.p())));
        }
        Ok(DVector::from_column_slice(u))
    }

    fn check_z(&self, v: &[f64]) -> Result<DVector<f64>> {
        if v.len() != self.n() {
            return Err(invalid(format!("z has {} entries, expected {}", v.len(), self.n())));
        }
        Ok(DVector::from_column_slice(v))
    }

    /// `A⁻¹(w + Xᵀz)`
    fn conditional_mean(&self, z: &DVector<f64>) -> DVector<f64> {
        let rhs = &self.w + self.x.transpose() * z;
        let y = self.a_lower.solve_lower_triangular(&rhs).expect("positive diagonal");
        self.a_lower.tr_solve_lower_triangular(&y).expect("positive diagonal")
    }

    /// `zᵀ(I − X A⁻¹ Xᵀ)z`
    pub fn sandwich_rate(&self, z: &[f64]) -> Result<f64> {
        let z = self.check_z(z)?;
        let proj = self
            .a_lower
            .solve_lower_triangular(&(self.x.transpose() * &z))
            .expect("positive diagonal");
        Ok((z.norm_squared() - proj.norm_squared()).max(f64::MIN_POSITIVE))
    }
}

impl DaModel for ProbitModel {
    fn name(&self) -> &str {
        "probit"
    }

    fn u_dim(&self) -> usize {
        self.p()
    }

    fn v_dim(&self) -> usize {
        self.n()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            log_pdf_v_given_u: true,
            log_pdf_u_given_v: true,
            sandwich: self.w.iter().all(|v| *v == 0.0),
        }
    }

    fn sample_v_given_u(&self, u: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
        let eta = &self.x * self.check_beta(u)?;
        Ok((0..self.n())
            .map(|i| truncnorm::sample(eta[i], 1.0, self.sides[i], rng))
            .collect())
    }

    fn sample_u_given_v(&self, v: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
        let mean = self.conditional_mean(&self.check_z(v)?);
        let e = standard_normal_vector(self.p(), rng);
        let noise = self.a_lower.tr_solve_lower_triangular(&e).expect("positive diagonal");
        Ok((mean + noise).as_slice().to_vec())
    }

    fn log_pdf_v_given_u(&self, v: &[f64], u: &[f64]) -> Result<f64> {
        let z = self.check_z(v)?;
        let eta = &self.x * self.check_beta(u)?;
        let mut total = 0.0;
        for i in 0..self.n() {
            if !self.sides[i].contains(z[i]) {
                return Ok(f64::NEG_INFINITY);
            }
            total += log_phi(z[i] - eta[i]) - log_ndtr(self.sign(i) * eta[i]);
        }
        Ok(total)
    }

    fn log_pdf_u_given_v(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        let beta = self.check_beta(u)?;
        let mean = self.conditional_mean(&self.check_z(v)?);
        let d = self.a_lower.transpose() * (beta - mean);
        Ok(-(self.p() as f64) * LN_SQRT_2PI + self.a_half_log_det - 0.5 * d.norm_squared())
    }

    /// Haar PX-DA move `z ↦ g z` with `g² ~ Gamma(n/2, rate c/2)`,
    /// `c = zᵀ(I − X A⁻¹ Xᵀ)z`. Needs `w = 0`.
    fn sandwich_step(&self, v: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
        if !self.capabilities().sandwich {
            return Err(Error::MissingCapability("a sandwich step (requires w = 0)"));
        }
        let c = self.sandwich_rate(v)?;
        let g = sample_gamma(0.5 * self.n() as f64, 0.5 * c, rng).sqrt();
        Ok(v.iter().map(|z| g * z).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single() -> ProbitModel {
        let x = DMatrix::from_element(1, 1, 1.0);
        ProbitModel::new(x, &[1.0], DMatrix::from_element(1, 1, 1.0), DVector::zeros(1)).unwrap()
    }

    #[test]
    fn single_observation_conditional() {
        // A = 2, so β | z ~ N(z/2, 1/2)
        let m = single();
        let lp = m.log_pdf_u_given_v(&[0.0], &[0.0]).unwrap();
        assert!((lp + 0.5 * std::f64::consts::PI.ln()).abs() < 1e-12, "{lp}");
    }

    #[test]
    fn symmetric_data_gives_zero_mode() {
        let x = DMatrix::from_column_slice(4, 1, &[1.0, -1.0, 2.0, -2.0]);
        let m = ProbitModel::with_g_prior(x, &[1.0, 1.0, 0.0, 0.0], 2.0).unwrap();
        assert!(m.posterior_mode()[0].abs() < 1e-12);
        assert!(m.mle().unwrap()[0].abs() < 1e-12);
    }

    #[test]
    fn mode_has_zero_gradient() {
        let x = DMatrix::from_row_slice(5, 2, &[1.0, 0.3, 1.0, -1.2, 1.0, 0.8, 1.0, 2.0, 1.0, -0.4]);
        let m = ProbitModel::with_g_prior(x, &[1.0, 0.0, 0.0, 1.0, 1.0], DEFAULT_G).unwrap();
        let (_, grad, _) = m.objective(m.posterior_mode(), true);
        assert!(grad.norm() < 1e-10);
    }

    #[test]
    fn separated_data_fails_mle_only() {
        let x = DMatrix::from_column_slice(4, 1, &[1.0, 2.0, -1.0, -2.0]);
        let m = ProbitModel::with_g_prior(x, &[1.0, 1.0, 0.0, 0.0], 2.0).unwrap();
        assert!(matches!(m.psi(30.0), Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn rejects_bad_inputs() {
        let x = DMatrix::from_column_slice(2, 1, &[1.0, 1.0]);
        let q = DMatrix::from_element(1, 1, 1.0);
        assert!(ProbitModel::new(x.clone(), &[1.0, 0.5], q.clone(), DVector::zeros(1)).is_err());
        assert!(ProbitModel::new(x.clone(), &[1.0], q.clone(), DVector::zeros(1)).is_err());
        let neg = DMatrix::from_element(1, 1, -1.0);
        assert!(ProbitModel::new(x.clone(), &[1.0, 0.0], neg, DVector::zeros(1)).is_err());
        let collinear = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(
            ProbitModel::new(collinear, &[1.0, 0.0], DMatrix::identity(2, 2), DVector::zeros(2)),
            Err(Error::Rank(_))
        ));
    }

    #[test]
    fn sandwich_only_with_zero_w() {
        let x = DMatrix::from_column_slice(2, 1, &[1.0, -1.0]);
        let q = DMatrix::from_element(1, 1, 1.0);
        let m = ProbitModel::new(x, &[1.0, 0.0], q, DVector::from_element(1, 0.5)).unwrap();
        assert!(!m.capabilities().sandwich);
        let mut rng = RandomStream::new(0, 0);
        assert!(matches!(
            m.sandwich_step(&[1.0, -1.0], &mut rng),
            Err(Error::MissingCapability(_))
        ));
    }

    #[test]
    fn sandwich_preserves_sign_pattern() {
        let x = DMatrix::from_column_slice(3, 1, &[1.0, 0.5, -0.7]);
        let m = ProbitModel::with_g_prior(x, &[1.0, 0.0, 1.0], 2.0).unwrap();
        let mut rng = RandomStream::new(3, 0);
        for _ in 0..100 {
            let z = m.sandwich_step(&[0.4, -0.4, 0.4], &mut rng).unwrap();
            assert!(z[0] > 0.0 && z[1] < 0.0 && z[2] > 0.0);
            assert!((z[0] - z[2]).abs() < 1e-15 && (z[0] + z[1]).abs() < 1e-15);
        }
    }

    #[test]
    fn v_density_is_minus_infinity_off_orthant() {
        let m = single();
        assert_eq!(m.log_pdf_v_given_u(&[-0.1], &[0.0]).unwrap(), f64::NEG_INFINITY);
    }
}
