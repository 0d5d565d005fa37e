use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use dagap::estimator::{estimate_power_sum, run_stream, Variant};
use dagap::models::GaussianToyModel;
use dagap_ffi::*;

fn last_error() -> String {
    let p = dagap_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn gaussian_estimate_matches_library() {
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { dagap_gaussian_toy_new(&mut model) }, DagapStatus::Ok);
    let mut est = DagapEstimate::default();
    let status = unsafe { dagap_estimate_power_sum(model, DagapVariant::Alg1 as u32, 2, 5000, 9, &mut est) };
    assert_eq!(status, DagapStatus::Ok);
    let direct = estimate_power_sum(
        &GaussianToyModel,
        Variant::Alg1,
        &GaussianToyModel::default_omega(),
        2,
        5000,
        &run_stream(9, 2),
    )
    .unwrap();
    assert_eq!(est.mean.to_bits(), direct.mean.to_bits());
    assert_eq!(est.std_err.to_bits(), direct.std_err.to_bits());
    assert_eq!(est.k, 2);
    assert!(!est.degenerate);

    // the toy has no sandwich move
    let status = unsafe { dagap_estimate_power_sum(model, DagapVariant::Alg1S as u32, 1, 100, 0, &mut est) };
    assert_eq!(status, DagapStatus::MissingCapability);
    assert!(last_error().contains("sandwich"));
    let status = unsafe { dagap_estimate_power_sum(model, 17, 1, 100, 0, &mut est) };
    assert_eq!(status, DagapStatus::InvalidArgument);
    unsafe { dagap_model_free(model) };
}

#[test]
fn finite_chain_sandwich_estimate() {
    let joint = [0.375, 0.125, 0.125, 0.375];
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { dagap_finite_new(joint.as_ptr(), 2, 2, &mut model) }, DagapStatus::Ok);
    // P has eigenvalues 1 and 1/4; the sandwich chain has 1 and 1/16
    let mut est = DagapEstimate::default();
    let status = unsafe { dagap_estimate_power_sum(model, DagapVariant::Alg2S as u32, 1, 20_000, 1, &mut est) };
    assert_eq!(status, DagapStatus::Ok);
    assert!((est.mean - 1.0625).abs() < 4.0 * est.std_err + 1e-12, "{}", est.mean);
    unsafe { dagap_model_free(model) };

    let bad = [0.5, 0.5, 0.5, 0.5];
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { dagap_finite_new(bad.as_ptr(), 2, 2, &mut model) }, DagapStatus::InvalidArgument);
    assert!(model.is_null());
    assert!(last_error().contains("sum"));
}

#[test]
fn regression_and_probit_handles() {
    let x = [1.0, 0.2, 1.0, -0.7, 1.0, 1.1, 1.0, 0.4, 1.0, -1.5, 1.0, 0.9];
    let y = [1.3, -0.2, 2.1, 0.8, -1.9, 1.4];
    let mut reg = ptr::null_mut();
    assert_eq!(unsafe { dagap_regression_new(x.as_ptr(), y.as_ptr(), 6, 2, &mut reg) }, DagapStatus::Ok);
    let mut est = DagapEstimate::default();
    assert_eq!(
        unsafe { dagap_estimate_power_sum(reg, DagapVariant::Alg1 as u32, 1, 2000, 3, &mut est) },
        DagapStatus::Ok
    );
    assert!(est.mean.is_finite() && est.mean > 0.0);
    // no ψ for the regression model
    assert_eq!(
        unsafe { dagap_estimate_power_sum(reg, DagapVariant::Alg2 as u32, 1, 2000, 3, &mut est) },
        DagapStatus::MissingCapability
    );
    unsafe { dagap_model_free(reg) };

    let yb = [1.0, 0.0, 1.0, 1.0, 0.0, 0.0];
    let mut probit = ptr::null_mut();
    assert_eq!(
        unsafe { dagap_probit_new(x.as_ptr(), yb.as_ptr(), 6, 2, 3.5, 0.0, &mut probit) },
        DagapStatus::Ok
    );
    assert_eq!(
        unsafe { dagap_estimate_power_sum(probit, DagapVariant::Alg2S as u32, 1, 2000, 3, &mut est) },
        DagapStatus::Ok
    );
    assert!(est.mean >= 1.0 - 4.0 * est.std_err);
    unsafe { dagap_model_free(probit) };

    let bad_y = [1.0, 0.5, 1.0, 1.0, 0.0, 0.0];
    let mut probit = ptr::null_mut();
    assert_ne!(
        unsafe { dagap_probit_new(x.as_ptr(), bad_y.as_ptr(), 6, 2, 3.5, 0.0, &mut probit) },
        DagapStatus::Ok
    );
}

#[test]
fn bounds_on_exact_sums() {
    let mut b = DagapBounds::default();
    let status = unsafe { dagap_bounds(2, 4.0 / 3.0, 0.0, 2.0, 0.0, 0.05, &mut b) };
    assert_eq!(status, DagapStatus::Ok);
    assert!((b.l_point - 1.0 / 3.0).abs() < 1e-15);
    assert!((b.u_point - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    assert!(!b.clamped);
    assert_eq!(unsafe { dagap_bounds(2, 1.1, 0.01, 1.2, 0.01, 2.0, &mut b) }, DagapStatus::InvalidArgument);
    assert_eq!(unsafe { dagap_bounds(1, 0.9, 0.01, 0.0, 0.0, 0.05, &mut b) }, DagapStatus::Ok);
    assert!(b.clamped);
}

#[test]
fn null_pointers_are_reported() {
    let mut est = DagapEstimate::default();
    assert_eq!(
        unsafe { dagap_estimate_power_sum(ptr::null(), 0, 1, 100, 0, &mut est) },
        DagapStatus::NullPointer
    );
    assert!(last_error().contains("model"));
    assert_eq!(unsafe { dagap_gaussian_toy_new(ptr::null_mut()) }, DagapStatus::NullPointer);
    unsafe {
        dagap_model_free(ptr::null_mut());
        dagap_string_free(ptr::null_mut());
    }
}

#[test]
fn config_to_json() {
    let toml = CString::new("model = \"gaussian-toy\"\nk_max = 2\nn_samples = 4000\nseed = 4\n").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { dagap_run_config_json(toml.as_ptr(), &mut out) }, DagapStatus::Ok);
    let json = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { dagap_string_free(out) };
    let doc = dagap::report::ReportDocument::from_json(&json).unwrap();
    assert_eq!(doc.rows.len(), 2);
    assert!(doc.runtime.is_none());

    // same config through the library gives the same bytes
    let config = dagap::config::RunConfig::from_toml_str(toml.to_str().unwrap()).unwrap();
    assert_eq!(dagap::runner::run_config(&config, false).unwrap().to_json().unwrap(), json);

    let broken = CString::new("model = \"probit\"\n").unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { dagap_run_config_json(broken.as_ptr(), &mut out) };
    assert_ne!(status, DagapStatus::Ok);
    assert!(out.is_null());
    assert!(last_error().contains("data_path"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/dagap.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "dagap_gaussian_toy_new",
        "dagap_finite_new",
        "dagap_regression_new",
        "dagap_probit_new",
        "dagap_model_free",
        "dagap_estimate_power_sum",
        "dagap_bounds",
        "dagap_run_config_json",
        "dagap_string_free",
        "dagap_last_error",
        "typedef struct DagapModel DagapModel;",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping compile check");
        return;
    };
    let dir = tempfile_dir();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"dagap.h\"\nint main(void) {\n  DagapModel *m = 0;\n  DagapEstimate e;\n  if (dagap_gaussian_toy_new(&m) != DAGAP_STATUS_OK) return 1;\n  DagapStatus s = dagap_estimate_power_sum(m, DAGAP_VARIANT_ALG1, 1, 100, 0, &e);\n  dagap_model_free(m);\n  return s == DAGAP_STATUS_OK ? 0 : 1;\n}\n",
    )
    .unwrap();
    let out = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .output()
        .unwrap();
    let _ = std::fs::remove_dir_all(&dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("dagap-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
