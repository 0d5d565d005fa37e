//! C interface to the `dagap` estimator.
//!
//! Models are opaque handles created by the `dagap_*_new` functions and
//! released with [`dagap_model_free`]. Every fallible call returns a
//! [`DagapStatus`]; on failure a message is kept per thread and can be read
//! with [`dagap_last_error`]. Strings returned by the library must be
//! released with [`dagap_string_free`].
//!
//! Matrices are passed row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dagap::config::RunConfig;
use dagap::estimator::{bounds_from_values, estimate_power_sum, run_stream, ReferenceDensity, Variant};
use dagap::models::probit::DEFAULT_PSI_DOF;
use dagap::models::{GaussianToyModel, ProbitModel, RegressionModel};
use dagap::oracle::{FiniteDaChain, FiniteDaModel};
use dagap::runner::run_config;
use dagap::{DaModel, Error};
use nalgebra::{DMatrix, DVector};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DagapStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    MissingCapability = 3,
    DataError = 4,
    ConfigError = 5,
    NumericalError = 6,
    IoError = 7,
    Panic = 8,
}

/// Values accepted by the `variant` argument of [`dagap_estimate_power_sum`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DagapVariant {
    Alg1 = 0,
    Alg1S = 1,
    Alg2 = 2,
    Alg2S = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DagapEstimate {
    pub k: usize,
    pub mean: f64,
    pub std_err: f64,
    pub n_samples: u64,
    pub ess: f64,
    pub max_weight_share: f64,
    /// NaN when there were too few samples for a tail fit.
    pub tail_shape: f64,
    pub degenerate: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DagapBounds {
    pub l_point: f64,
    pub u_point: f64,
    pub l_ci_lo: f64,
    pub l_ci_hi: f64,
    pub u_ci_lo: f64,
    pub u_ci_hi: f64,
    pub lambda1_lo: f64,
    pub lambda1_hi: f64,
    pub clamped: bool,
}

/// A model together with the reference densities it supports.
pub struct DagapModel {
    model: Box<dyn DaModel>,
    omega: Option<ReferenceDensity>,
    psi: Option<ReferenceDensity>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DagapStatus {
    match e {
        Error::InvalidParameters(_) | Error::ReferenceSpace { .. } | Error::MismatchedK { .. } | Error::InvalidPmf(_) => {
            DagapStatus::InvalidArgument
        }
        Error::MissingCapability(_) => DagapStatus::MissingCapability,
        Error::Rank(_) | Error::Data { .. } | Error::MissingFile(_) => DagapStatus::DataError,
        Error::Config(_) => DagapStatus::ConfigError,
        Error::NonFiniteWeight { .. } | Error::NoConvergence { .. } => DagapStatus::NumericalError,
        Error::Io(_) | Error::Json(_) => DagapStatus::IoError,
    }
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (DagapStatus, String)>) -> DagapStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DagapStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            DagapStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (DagapStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (DagapStatus, String) {
    (DagapStatus::NullPointer, format!("{what} is null"))
}

fn bad(msg: impl Into<String>) -> (DagapStatus, String) {
    (DagapStatus::InvalidArgument, msg.into())
}

unsafe fn matrix(data: *const f64, rows: usize, cols: usize, what: &str) -> Result<DMatrix<f64>, (DagapStatus, String)> {
    if data.is_null() {
        return Err(null(what));
    }
    let len = rows.checked_mul(cols).ok_or_else(|| bad(format!("{what} is too large")))?;
    if len == 0 {
        return Err(bad(format!("{what} is empty")));
    }
    let slice = std::slice::from_raw_parts(data, len);
    Ok(DMatrix::from_row_slice(rows, cols, slice))
}

unsafe fn publish(out: *mut *mut DagapModel, model: DagapModel) -> Result<(), (DagapStatus, String)> {
    *out = Box::into_raw(Box::new(model));
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dagap_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// The Gaussian toy chain with ω = N(0, 1) and ψ = N(0, 2).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn dagap_gaussian_toy_new(out: *mut *mut DagapModel) -> DagapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        publish(
            out,
            DagapModel {
                model: Box::new(GaussianToyModel),
                omega: Some(GaussianToyModel::default_omega()),
                psi: Some(GaussianToyModel::default_psi()),
            },
        )
    })
}

/// A finite DA chain from an `m × n` joint pmf (rows index U), with the
/// sandwich move enabled and uniform references.
///
/// # Safety
/// `joint` must point to `m * n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dagap_finite_new(joint: *const f64, m: usize, n: usize, out: *mut *mut DagapModel) -> DagapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let joint = matrix(joint, m, n, "joint")?;
        let model = FiniteDaModel::new(FiniteDaChain::from_joint(joint).map_err(lib_err)?).with_sandwich();
        let (omega, psi) = (model.uniform_omega(), model.uniform_psi());
        publish(
            out,
            DagapModel {
                model: Box::new(model),
                omega: Some(omega),
                psi: Some(psi),
            },
        )
    })
}

/// Regression with scale-mixture errors; ω is the default inverse-gamma product.
///
/// # Safety
/// `x` must point to `n * p` doubles, `y` to `n` doubles, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dagap_regression_new(
    x: *const f64,
    y: *const f64,
    n: usize,
    p: usize,
    out: *mut *mut DagapModel,
) -> DagapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let x = matrix(x, n, p, "x")?;
        let y = DVector::from_column_slice(matrix(y, n, 1, "y")?.as_slice());
        let model = RegressionModel::new(x, y).map_err(lib_err)?;
        let omega = model.default_omega();
        publish(
            out,
            DagapModel {
                model: Box::new(model),
                omega: Some(omega),
                psi: None,
            },
        )
    })
}

/// Probit regression with prior precision `XᵀX / g` and zero prior mean
/// vector; ψ is the multivariate t with `psi_dof` degrees of freedom
/// (pass 0 for the default of 30).
///
/// # Safety
/// `x` must point to `n * p` doubles, `y` to `n` values in {0, 1}, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dagap_probit_new(
    x: *const f64,
    y: *const f64,
    n: usize,
    p: usize,
    g: f64,
    psi_dof: f64,
    out: *mut *mut DagapModel,
) -> DagapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let x = matrix(x, n, p, "x")?;
        let y = matrix(y, n, 1, "y")?;
        let model = ProbitModel::with_g_prior(x, y.as_slice(), g).map_err(lib_err)?;
        let dof = if psi_dof == 0.0 { DEFAULT_PSI_DOF } else { psi_dof };
        let psi = model.psi(dof).map_err(lib_err)?;
        publish(
            out,
            DagapModel {
                model: Box::new(model),
                omega: None,
                psi: Some(psi),
            },
        )
    })
}

/// Release a model handle. Null is ignored.
///
/// # Safety
/// `model` must come from a `dagap_*_new` call and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dagap_model_free(model: *mut DagapModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Estimate `s_k` with `n` samples. `variant` is a [`DagapVariant`] value.
/// Results match `dagap run` for the same seed and `k`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dagap_estimate_power_sum(
    model: *const DagapModel,
    variant: u32,
    k: usize,
    n: u64,
    seed: u64,
    out: *mut DagapEstimate,
) -> DagapStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let variant = match variant {
            0 => Variant::Alg1,
            1 => Variant::Alg1S,
            2 => Variant::Alg2,
            3 => Variant::Alg2S,
            v => return Err(bad(format!("unknown variant {v}"))),
        };
        let reference = match variant {
            Variant::Alg1 | Variant::Alg1S => m.omega.as_ref(),
            Variant::Alg2 | Variant::Alg2S => m.psi.as_ref(),
        }
        .ok_or_else(|| {
            (
                DagapStatus::MissingCapability,
                format!("model {} has no reference density for {variant}", m.model.name()),
            )
        })?;
        let e = estimate_power_sum(m.model.as_ref(), variant, reference, k, n, &run_stream(seed, k)).map_err(lib_err)?;
        *out = DagapEstimate {
            k: e.k,
            mean: e.mean,
            std_err: e.std_err,
            n_samples: e.n_samples,
            ess: e.ess,
            max_weight_share: e.max_weight_share,
            tail_shape: e.tail_shape.unwrap_or(f64::NAN),
            degenerate: e.degenerate,
        };
        Ok(())
    })
}

/// Bounds on `λ₁` from `s_k` and, when `k ≥ 2`, `s_{k−1}` (ignored for `k = 1`).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dagap_bounds(
    k: usize,
    s_k: f64,
    se_k: f64,
    s_km1: f64,
    se_km1: f64,
    alpha: f64,
    out: *mut DagapBounds,
) -> DagapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let prev = (k >= 2).then_some((s_km1, se_km1));
        let b = bounds_from_values(k, (s_k, se_k), prev, alpha).map_err(lib_err)?;
        *out = DagapBounds {
            l_point: b.l_point,
            u_point: b.u_point,
            l_ci_lo: b.l_ci.0,
            l_ci_hi: b.l_ci.1,
            u_ci_lo: b.u_ci.0,
            u_ci_hi: b.u_ci.1,
            lambda1_lo: b.lambda1_interval.0,
            lambda1_hi: b.lambda1_interval.1,
            clamped: b.clamped,
        };
        Ok(())
    })
}

/// Run a full experiment from a TOML config and return the JSON report,
/// without runtime fields. Output paths in the config are honored.
///
/// # Safety
/// `config_toml` must be a nul-terminated UTF-8 string and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn dagap_run_config_json(config_toml: *const c_char, out_json: *mut *mut c_char) -> DagapStatus {
    guard(|| {
        if config_toml.is_null() {
            return Err(null("config_toml"));
        }
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let text = CStr::from_ptr(config_toml)
            .to_str()
            .map_err(|_| bad("config is not valid UTF-8"))?;
        let config = RunConfig::from_toml_str(text).map_err(lib_err)?;
        let doc = run_config(&config, false).map_err(lib_err)?;
        doc.write_outputs(config.output.json.as_deref(), config.output.csv.as_deref())
            .map_err(lib_err)?;
        let json = doc.to_json().map_err(lib_err)?;
        *out_json = CString::new(json).map_err(|_| bad("report contains a nul byte"))?.into_raw();
        Ok(())
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dagap_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
