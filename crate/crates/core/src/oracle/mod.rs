//! Finite-state DA chains with exactly computable spectra.
//!
//! For a joint pmf `J` on an `m × n` grid the DA transition matrix is
//! `P = Π_{V|U} Π_{U|V}`. It is reversible with respect to `π_U`, and
//! `D^{1/2} P D^{-1/2} = A Aᵀ` with `A[u,v] = J[u,v] / sqrt(π_U[u] π_V[v])`,
//! so the spectrum is real, lies in `[0, 1]`, and comes from a symmetric
//! eigenproblem.

pub mod check;
pub(crate) mod model;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::rng::RandomStream;

pub use model::FiniteDaModel;

/// Eigenvalues below this are treated as exactly zero.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// A validated joint pmf with its derived conditional and transition matrices.
#[derive(Debug, Clone)]
pub struct FiniteDaChain {
    joint: DMatrix<f64>,
    pi_u: Vec<f64>,
    pi_v: Vec<f64>,
    v_given_u: DMatrix<f64>,
    u_given_v: DMatrix<f64>,
    transition: DMatrix<f64>,
}

impl FiniteDaChain {
    /// Validate `joint` (rows index U, columns index V) and derive
    /// `π_U`, `π_V`, `Π_{V|U}` (m × n), `Π_{U|V}` (n × m) and `P` (m × m).
    pub fn from_joint(joint: DMatrix<f64>) -> Result<Self> {
        let (m, n) = joint.shape();
        if m == 0 || n == 0 {
            return Err(Error::InvalidPmf("empty joint matrix".into()));
        }
        if joint.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidPmf("entries must be finite and non-negative".into()));
        }
        let total: f64 = joint.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidPmf(format!("entries sum to {total}, not 1")));
        }
        let pi_u: Vec<f64> = joint.row_iter().map(|r| r.sum()).collect();
        let pi_v: Vec<f64> = joint.column_iter().map(|c| c.sum()).collect();
        if let Some(i) = pi_u.iter().position(|p| *p <= 0.0) {
            return Err(Error::InvalidPmf(format!("U-marginal is zero at row {i}")));
        }
        if let Some(j) = pi_v.iter().position(|p| *p <= 0.0) {
            return Err(Error::InvalidPmf(format!("V-marginal is zero at column {j}")));
        }
        let v_given_u = DMatrix::from_fn(m, n, |u, v| joint[(u, v)] / pi_u[u]);
        let u_given_v = DMatrix::from_fn(n, m, |v, u| joint[(u, v)] / pi_v[v]);
        let transition = &v_given_u * &u_given_v;
        Ok(Self {
            joint,
            pi_u,
            pi_v,
            v_given_u,
            u_given_v,
            transition,
        })
    }

    pub fn joint(&self) -> &DMatrix<f64> {
        &self.joint
    }
    pub fn pi_u(&self) -> &[f64] {
        &self.pi_u
    }
    pub fn pi_v(&self) -> &[f64] {
        &self.pi_v
    }
    /// `Π_{V|U}[u, v]`
    pub fn v_given_u(&self) -> &DMatrix<f64> {
        &self.v_given_u
    }
    /// `Π_{U|V}[v, u]`
    pub fn u_given_v(&self) -> &DMatrix<f64> {
        &self.u_given_v
    }
    /// `P[u, u']`
    pub fn transition(&self) -> &DMatrix<f64> {
        &self.transition
    }

    /// `diag(π_U)^{1/2} P diag(π_U)^{-1/2}`, built as `A Aᵀ` so it is
    /// symmetric by construction.
    pub fn symmetrized(&self) -> DMatrix<f64> {
        let (m, n) = self.joint.shape();
        let a = DMatrix::from_fn(m, n, |u, v| self.joint[(u, v)] / (self.pi_u[u] * self.pi_v[v]).sqrt());
        &a * a.transpose()
    }

    /// `Σ_u P^k[u, u]` by repeated multiplication.
    pub fn exact_power_sum_via_trace(&self, k: usize) -> f64 {
        self.transition_power(k).trace()
    }

    pub fn transition_power(&self, k: usize) -> DMatrix<f64> {
        let m = self.transition.nrows();
        let mut acc = DMatrix::identity(m, m);
        for _ in 0..k {
            acc = &acc * &self.transition;
        }
        acc
    }

    pub fn exact_spectrum(&self) -> SpectralSummary {
        let eig = SymmetricEigen::new(self.symmetrized());
        SpectralSummary::from_eigenvalues(eig.eigenvalues.iter().copied().collect())
    }
}

/// Exact eigenvalues of a DA operator with the derived power sums and bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    /// Descending, `λ₀ = 1` first, values below [`EIGEN_FLOOR`] dropped.
    pub eigenvalues: Vec<f64>,
}

impl SpectralSummary {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.retain(|l| *l >= EIGEN_FLOOR);
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Self { eigenvalues }
    }

    /// `λ₁`, or 0 when the operator has no nontrivial eigenvalue.
    pub fn lambda1(&self) -> f64 {
        self.eigenvalues.get(1).copied().unwrap_or(0.0)
    }

    fn nontrivial(&self) -> &[f64] {
        self.eigenvalues.get(1..).unwrap_or(&[])
    }

    /// `s_k = Σ λᵢ^k`
    pub fn power_sum(&self, k: usize) -> f64 {
        self.eigenvalues.iter().map(|l| l.powi(k as i32)).sum()
    }

    /// `Σ_{i≥1} (λᵢ/λ₁)^k`, computed in ratio form so large `k` never underflows.
    fn scaled_tail(&self, k: usize) -> f64 {
        let l1 = self.lambda1();
        self.nontrivial().iter().map(|l| (l / l1).powi(k as i32)).sum()
    }

    /// `u_k = (s_k − 1)^{1/k}`
    pub fn upper_bound(&self, k: usize) -> f64 {
        if self.nontrivial().is_empty() {
            return 0.0;
        }
        self.lambda1() * self.scaled_tail(k).powf(1.0 / k as f64)
    }

    /// `l_k = (s_k − 1)/(s_{k−1} − 1)`, with `l_1 = 0` since `s_0 = ∞`.
    pub fn lower_bound(&self, k: usize) -> f64 {
        if k <= 1 || self.nontrivial().is_empty() {
            return 0.0;
        }
        self.lambda1() * self.scaled_tail(k) / self.scaled_tail(k - 1)
    }

    pub fn power_sums(&self, k_max: usize) -> Vec<f64> {
        (1..=k_max).map(|k| self.power_sum(k)).collect()
    }
    pub fn upper_bounds(&self, k_max: usize) -> Vec<f64> {
        (1..=k_max).map(|k| self.upper_bound(k)).collect()
    }
    pub fn lower_bounds(&self, k_max: usize) -> Vec<f64> {
        (1..=k_max).map(|k| self.lower_bound(k)).collect()
    }
}

/// A strictly positive random joint pmf on an `m × n` grid.
///
/// Entries are `exp(2 Z)` for standard normal `Z`, normalized, which gives a
/// wide spread of spectral gaps.
pub fn random_finite_chain(m: usize, n: usize, rng: &mut RandomStream) -> Result<FiniteDaChain> {
    use rand_distr::{Distribution, StandardNormal};
    if m < 2 || n < 2 {
        return Err(Error::InvalidParameters("random chains need m, n >= 2".into()));
    }
    let raw = DMatrix::from_fn(m, n, |_, _| {
        let z: f64 = StandardNormal.sample(rng);
        (2.0 * z).exp()
    });
    let total: f64 = raw.iter().sum();
    FiniteDaChain::from_joint(raw / total)
}
