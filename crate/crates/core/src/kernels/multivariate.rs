//! Multivariate normal and t families, parameterized by the lower Cholesky
//! factor of the scale matrix.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, Gamma, StandardNormal};

use super::special::{ln_gamma, LN_SQRT_2PI};
use crate::error::{invalid, Result};
use crate::rng::RandomStream;

/// Lower Cholesky factor `L` of a symmetric positive definite matrix `S = L Lᵀ`.
///
/// Only obtainable through a successful factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    lower: DMatrix<f64>,
    half_log_det: f64,
}

impl CholeskyFactor {
    pub fn new(matrix: &DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(invalid("scale matrix must be square and non-empty"));
        }
        let scale = matrix.amax().max(1.0);
        for i in 0..matrix.nrows() {
            for j in 0..i {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > 1e-10 * scale {
                    return Err(invalid("scale matrix is not symmetric"));
                }
            }
        }
        let chol = matrix
            .clone()
            .cholesky()
            .ok_or_else(|| invalid("scale matrix is not positive definite"))?;
        let lower = chol.unpack();
        let half_log_det = lower.diagonal().iter().map(|d| d.ln()).sum();
        Ok(Self { lower, half_log_det })
    }

    pub fn dim(&self) -> usize {
        self.lower.nrows()
    }

    pub fn lower(&self) -> &DMatrix<f64> {
        &self.lower
    }

    /// `½ ln det S`
    pub fn half_log_det(&self) -> f64 {
        self.half_log_det
    }

    /// `dᵀ S⁻¹ d`
    pub fn mahalanobis_sq(&self, diff: &DVector<f64>) -> f64 {
        let y = self
            .lower
            .solve_lower_triangular(diff)
            .expect("Cholesky factor has a positive diagonal");
        y.norm_squared()
    }

    /// `L z`
    pub fn correlate(&self, z: &DVector<f64>) -> DVector<f64> {
        &self.lower * z
    }

    /// The factored matrix `L Lᵀ`.
    pub fn matrix(&self) -> DMatrix<f64> {
        &self.lower * self.lower.transpose()
    }
}

pub(crate) fn standard_normal_vector(dim: usize, rng: &mut RandomStream) -> DVector<f64> {
    DVector::from_fn(dim, |_, _| StandardNormal.sample(rng))
}

pub fn mvn_sample(mean: &DVector<f64>, factor: &CholeskyFactor, rng: &mut RandomStream) -> DVector<f64> {
    let z = standard_normal_vector(mean.len(), rng);
    mean + factor.correlate(&z)
}

pub fn mvn_log_pdf(x: &DVector<f64>, mean: &DVector<f64>, factor: &CholeskyFactor) -> f64 {
    let p = mean.len() as f64;
    -p * LN_SQRT_2PI - factor.half_log_det() - 0.5 * factor.mahalanobis_sq(&(x - mean))
}

pub fn mvt_sample(
    location: &DVector<f64>,
    factor: &CholeskyFactor,
    dof: f64,
    rng: &mut RandomStream,
) -> DVector<f64> {
    let z = standard_normal_vector(location.len(), rng);
    let chi2: f64 = Gamma::new(0.5 * dof, 2.0)
        .expect("dof validated positive")
        .sample(rng);
    location + factor.correlate(&z) * (dof / chi2).sqrt()
}

pub fn mvt_log_pdf(x: &DVector<f64>, location: &DVector<f64>, factor: &CholeskyFactor, dof: f64) -> f64 {
    let p = location.len() as f64;
    let q = factor.mahalanobis_sq(&(x - location));
    ln_gamma(0.5 * (dof + p)) - ln_gamma(0.5 * dof) - 0.5 * p * (dof * std::f64::consts::PI).ln()
        - factor.half_log_det()
        - 0.5 * (dof + p) * (q / dof).ln_1p()
}
