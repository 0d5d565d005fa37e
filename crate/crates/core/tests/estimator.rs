use dagap::estimator::{
    bounds_from_power_sums, bounds_from_values, estimate_power_sum, run_power_sum_experiment, run_stream,
    ExperimentSettings, Variant,
};
use dagap::models::{gaussian_exact_spectrum, GaussianToyModel, IndependenceModel};
use dagap::oracle::{random_finite_chain, FiniteDaModel, SpectralSummary};
use dagap::{Error, RandomStream};
use proptest::prelude::*;

#[test]
fn gaussian_estimates_cover_exact_power_sums() {
    let exact = gaussian_exact_spectrum(4);
    for (variant, reference) in [
        (Variant::Alg1, GaussianToyModel::default_omega()),
        (Variant::Alg2, GaussianToyModel::default_psi()),
    ] {
        for k in 1..=4 {
            let est = estimate_power_sum(&GaussianToyModel, variant, &reference, k, 20_000, &run_stream(31, k)).unwrap();
            let z = (est.mean - exact.power_sums[k - 1]).abs() / est.std_err;
            assert!(z < 4.0, "{variant:?} k = {k}: {} vs {}", est.mean, exact.power_sums[k - 1]);
            assert!(!est.degenerate);
        }
    }
}

#[test]
fn finite_chain_all_variants_cover_exact() {
    let chain = random_finite_chain(5, 4, &mut RandomStream::new(32, 0)).unwrap();
    let plain = chain.exact_spectrum();
    // the extra-q sandwich has transition P², so eigenvalues square
    let squared = SpectralSummary::from_eigenvalues(plain.eigenvalues.iter().map(|l| l * l).collect());
    let model = FiniteDaModel::new(chain.clone()).with_sandwich();
    for variant in Variant::ALL {
        let (reference, spectrum) = match variant {
            Variant::Alg1 => (model.uniform_omega(), &plain),
            Variant::Alg1S => (model.uniform_omega(), &squared),
            Variant::Alg2 => (model.uniform_psi(), &plain),
            Variant::Alg2S => (model.uniform_psi(), &squared),
        };
        for k in 1..=3 {
            let est = estimate_power_sum(&model, variant, &reference, k, 20_000, &run_stream(33, k)).unwrap();
            let exact = spectrum.power_sum(k);
            assert!((est.mean - exact).abs() < 4.0 * est.std_err, "{variant:?} k = {k}: {} vs {exact}", est.mean);
        }
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    // crosses several block boundaries with a ragged final block
    let settings = |workers| ExperimentSettings {
        variant: Variant::Alg1,
        k_max: 3,
        n_samples: 3 * 4096 + 17,
        alpha: 0.05,
        seed: 34,
        workers,
    };
    let omega = GaussianToyModel::default_omega();
    let base = run_power_sum_experiment(&GaussianToyModel, &omega, &settings(1)).unwrap();
    for workers in [2, 4, 8] {
        let other = run_power_sum_experiment(&GaussianToyModel, &omega, &settings(workers)).unwrap();
        assert_eq!(base.rows, other.rows, "workers = {workers}");
        for (a, b) in base.rows.iter().zip(&other.rows) {
            assert_eq!(a.estimate.mean.to_bits(), b.estimate.mean.to_bits());
            assert_eq!(a.estimate.std_err.to_bits(), b.estimate.std_err.to_bits());
        }
    }
}

#[test]
fn independence_chain_has_unit_weights() {
    for (variant, reference) in [
        (Variant::Alg1, IndependenceModel::omega()),
        (Variant::Alg2, IndependenceModel::psi()),
    ] {
        for k in 1..=3 {
            let est = estimate_power_sum(&IndependenceModel, variant, &reference, k, 5000, &run_stream(35, k)).unwrap();
            assert_eq!(est.mean, 1.0);
            assert_eq!(est.std_err, 0.0);
            assert!(!est.degenerate);
        }
    }
}

#[test]
fn exact_gaussian_bounds() {
    let exact = gaussian_exact_spectrum(4);
    assert!((exact.upper_bounds[3] - 0.50813).abs() < 5e-6);
    assert!((exact.lower_bounds[3] - 7.0 / 15.0).abs() < 1e-15);

    let b = bounds_from_values(2, (4.0 / 3.0, 0.0), Some((2.0, 0.0)), 0.05).unwrap();
    assert!((b.l_point - 1.0 / 3.0).abs() < 1e-15);
    assert!((b.u_point - 0.57735).abs() < 5e-6);
    assert_eq!(b.l_ci.0, b.l_ci.1);
    assert_eq!(b.u_ci.0, b.u_ci.1);
}

#[test]
fn clamped_bounds_when_sums_do_not_exceed_one() {
    let b = bounds_from_values(2, (0.99, 0.01), Some((1.2, 0.01)), 0.05).unwrap();
    assert!(b.clamped);
    assert_eq!((b.l_point, b.u_point), (0.0, 0.0));
    let b = bounds_from_values(3, (1.1, 0.01), Some((1.0, 0.01)), 0.05).unwrap();
    assert!(b.clamped);
}

#[test]
fn bad_arguments_are_rejected() {
    let omega = GaussianToyModel::default_omega();
    let psi = GaussianToyModel::default_psi();
    assert!(estimate_power_sum(&GaussianToyModel, Variant::Alg1, &omega, 1, 1, &run_stream(0, 1)).is_err());
    assert!(estimate_power_sum(&GaussianToyModel, Variant::Alg1, &omega, 0, 100, &run_stream(0, 0)).is_err());
    // reference on the wrong space
    assert!(estimate_power_sum(&GaussianToyModel, Variant::Alg1, &psi, 1, 100, &run_stream(0, 1)).is_err());
    // the Gaussian toy has no sandwich move
    assert!(matches!(
        estimate_power_sum(&GaussianToyModel, Variant::Alg1S, &omega, 1, 100, &run_stream(0, 1)),
        Err(Error::MissingCapability(_))
    ));
    assert!(bounds_from_values(1, (2.0, 0.1), None, 0.0).is_err());
    assert!(bounds_from_values(1, (2.0, 0.1), None, 1.0).is_err());
    assert!(matches!(
        bounds_from_values(2, (2.0, 0.1), None, 0.05),
        Err(Error::MismatchedK { .. })
    ));

    let e1 = estimate_power_sum(&GaussianToyModel, Variant::Alg1, &omega, 1, 100, &run_stream(0, 1)).unwrap();
    let e3 = estimate_power_sum(&GaussianToyModel, Variant::Alg1, &omega, 3, 100, &run_stream(0, 3)).unwrap();
    assert!(matches!(bounds_from_power_sums(&e3, Some(&e1), 0.05), Err(Error::MismatchedK { .. })));
    assert!(bounds_from_power_sums(&e3, None, 0.05).is_err());
}

fn spectrum_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, 1..12).prop_map(|mut v| {
        v.push(1.0);
        v
    })
}

proptest! {
    #[test]
    fn exact_bounds_bracket_lambda1_and_are_monotone(eigs in spectrum_strategy()) {
        let s = SpectralSummary::from_eigenvalues(eigs);
        let lambda1 = s.lambda1();
        let (u, l) = (s.upper_bounds(20), s.lower_bounds(20));
        for k in 0..20 {
            prop_assert!(l[k] <= lambda1 + 1e-10);
            prop_assert!(lambda1 <= u[k] + 1e-10);
            if k > 0 {
                prop_assert!(u[k] <= u[k - 1] + 1e-10);
                prop_assert!(l[k] + 1e-10 >= l[k - 1]);
            }
        }
    }

    #[test]
    fn bounds_from_exact_sums_have_zero_width(eigs in spectrum_strategy(), k in 2usize..8) {
        let s = SpectralSummary::from_eigenvalues(eigs);
        let (sk, skm1) = (s.power_sum(k), s.power_sum(k - 1));
        prop_assume!(sk > 1.0 + 1e-9 && skm1 > 1.0 + 1e-9);
        let b = bounds_from_values(k, (sk, 0.0), Some((skm1, 0.0)), 0.05).unwrap();
        prop_assert!(!b.clamped);
        prop_assert!((b.u_point - s.upper_bound(k)).abs() < 1e-9);
        prop_assert!((b.l_point - s.lower_bound(k)).abs() < 1e-9);
        prop_assert_eq!(b.u_ci.0, b.u_ci.1);
        prop_assert_eq!(b.l_ci.0, b.l_ci.1);
    }

    #[test]
    fn intervals_contain_points_and_stay_in_unit_range(
        mean_k in 1.0001..4.0f64,
        mean_prev in 1.0001..4.0f64,
        se_k in 0.0..0.5f64,
        se_prev in 0.0..0.5f64,
        k in 2usize..10,
        alpha in 0.001..0.5f64,
    ) {
        let b = bounds_from_values(k, (mean_k, se_k), Some((mean_prev, se_prev)), alpha).unwrap();
        prop_assert!(b.u_ci.0 <= b.u_point && b.u_point <= b.u_ci.1);
        prop_assert!(b.l_ci.0 <= b.l_point && b.l_point <= b.l_ci.1);
        let (lo, hi) = b.lambda1_interval;
        prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        // a smaller alpha never narrows the interval
        let wider = bounds_from_values(k, (mean_k, se_k), Some((mean_prev, se_prev)), alpha / 2.0).unwrap();
        prop_assert!(wider.u_ci.1 >= b.u_ci.1 && wider.l_ci.0 <= b.l_ci.0);
    }
}
