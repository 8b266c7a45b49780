use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qgv_core::continuation::*;
use qgv_core::correlator::{reduce_to_differences, FieldIndex, Point, TestFunction};
use qgv_core::free_field::{scalar_schwinger_2pt, scalar_wightman_2pt, FreeScalar, ScalarVariant, PHI};
use qgv_core::linalg::hermitian_eigenvalues;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn free_fit(variant: ScalarVariant) -> SpectralFit {
    free_fit_result(variant).unwrap()
}

fn free_fit_result(variant: ScalarVariant) -> Result<SpectralFit, qgv_core::Error> {
    let fam = FreeScalar::with_variant(1.0, variant).unwrap();
    let idx = FieldIndex::scalar(PHI, 2);
    let form = reduce_to_differences(&fam, &idx, 3).unwrap();
    fit_spectral(
        &form,
        &idx,
        &TimeMomentumData::default_taus(),
        &TimeMomentumData::default_momenta(),
        &FitOptions::default(),
    )
}

/// Probes at least 0.2 away from the light cone.
fn probes(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let x: Point = std::array::from_fn(|_| rng.random_range(-2.5..2.5));
        let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
        if (r - x[0].abs()).abs() > 0.2 {
            out.push(x);
        }
    }
    out
}

#[test]
fn forward_cone_membership() {
    assert!(cone_member(&[1.0, 1.0, 1.0]).unwrap());
    assert!(cone_member(&[0.5]).unwrap());
    assert!(!cone_member(&[1.0, 0.0, 0.0]).unwrap());
    assert!(!cone_member(&[-1.0, -1.0]).unwrap());
    // boundary ray is excluded
    assert!(!cone_member(&[1.0, 1.0, 1.0, -0.01]).unwrap());
    assert!(cone_member(&[0.0; 3]).is_err());
    assert!(cone_member(&[1.0, f64::NAN]).is_err());
}

#[test]
fn free_scalar_fit_recovers_single_pole() {
    let fit = free_fit(ScalarVariant::Standard);
    assert!(fit.accepted(&FitOptions::default()), "residual {}", fit.residual);
    assert_eq!(fit.model.poles.len(), 1);
    let pole = fit.model.poles[0];
    assert!((pole.mass_sq - 1.0).abs() <= 0.01, "{pole:?}");
    assert!((pole.weight - 1.0).abs() <= 0.01, "{pole:?}");
    assert!(fit.condition.is_finite());
}

#[test]
fn two_pole_synthetic_fit() {
    let truth = SpectralModel::new(
        vec![Pole { mass_sq: 1.0, weight: 1.0 }, Pole { mass_sq: 4.0, weight: 0.3 }],
        None,
    )
    .unwrap();
    let data = TimeMomentumData::from_model(&truth, &TimeMomentumData::default_taus(), &TimeMomentumData::default_momenta());
    let fit = fit_data(&data, &FitOptions::default()).unwrap();
    let mut poles = fit.model.poles.clone();
    poles.sort_by(|a, b| a.mass_sq.total_cmp(&b.mass_sq));
    assert_eq!(poles.len(), 2, "{poles:?}");
    for (got, want) in poles.iter().zip(&truth.poles) {
        assert!((got.mass_sq - want.mass_sq).abs() <= 0.02 * want.mass_sq, "{got:?} vs {want:?}");
        assert!((got.weight - want.weight).abs() <= 0.02 * want.weight, "{got:?} vs {want:?}");
    }
}

#[test]
fn negative_kernel_admits_no_positive_spectral_fit() {
    // all weights are clamped to zero, which leaves nothing to linearize around
    match free_fit_result(ScalarVariant::SignFlipped) {
        Ok(fit) => {
            assert!(!fit.accepted(&FitOptions::default()));
            assert!(fit.residual > 0.5, "residual {}", fit.residual);
        }
        Err(qgv_core::Error::IllConditioned { residual, .. }) => assert!(residual > 0.5, "residual {residual}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn time_reflected_data_grow() {
    let fit = free_fit(ScalarVariant::TimeReflected);
    let min_rate = fit.unconstrained.iter().flat_map(|f| f.rates.iter().copied()).fold(f64::INFINITY, f64::min);
    assert!(min_rate < -0.5, "{min_rate}");
}

#[test]
fn round_trip_matches_free_wightman_function() {
    let fit = free_fit(ScalarVariant::Standard);
    let opts = BoundaryOptions::default();
    let mut worst: f64 = 0.0;
    for x in probes(20, 11) {
        let got = continue_to_wightman(&fit.model, &x, &opts).unwrap();
        let want = scalar_wightman_2pt(1.0, &x).unwrap();
        worst = worst.max((got - want).norm() / want.norm());
    }
    assert!(worst <= 1e-5, "worst relative deviation {worst:e}");
}

#[test]
fn spacelike_boundary_values_are_real() {
    let model = SpectralModel::single(1.0, 1.0).unwrap();
    let opts = BoundaryOptions::default();
    for x in probes(40, 5).into_iter().filter(|x| x[1] * x[1] + x[2] * x[2] + x[3] * x[3] > x[0] * x[0]).take(10) {
        let w = continue_to_wightman(&model, &x, &opts).unwrap();
        assert!(w.im.abs() <= 1e-8 * w.norm(), "{x:?}: {w}");
    }
}

#[test]
fn imaginary_time_reproduces_schwinger_function() {
    let model = SpectralModel::single(1.0, 1.0).unwrap();
    for &(tau, r) in &[(0.3, 0.0), (0.5, 1.2), (1.7, 0.4), (0.05, 2.0)] {
        let w = analytic_two_point(&model, 0.0, r, tau, 1e-13).unwrap().value;
        let s = scalar_schwinger_2pt(1.0, &[tau, r, 0.0, 0.0]).unwrap();
        assert!((w.re - s).abs() <= 1e-10 * s, "tau={tau} r={r}: {w} vs {s}");
        assert!(w.im.abs() <= 1e-12 * s);
    }
}

#[test]
fn boundary_value_precision_improves_with_levels() {
    let model = SpectralModel::single(1.0, 1.0).unwrap();
    let x = [0.7, 1.6, 0.0, 0.0];
    let exact = scalar_wightman_2pt(1.0, &x).unwrap();
    let err = |levels| {
        let o = BoundaryOptions { levels, ..BoundaryOptions::default() };
        (continue_to_wightman(&model, &x, &o).unwrap() - exact).norm()
    };
    assert!(err(5) < err(3));
    assert!(continue_to_wightman(&model, &[1.0, 1.0, 0.0, 0.0], &BoundaryOptions::default()).is_err());
}

fn growth_samples(model: &SpectralModel) -> Vec<AnalyticSample> {
    analytic_samples(model, &[-3.0, -1.0, 0.0, 0.5, 2.0], &[0.0, 0.5, 1.0, 3.0], &[1.0, 0.3, 0.1, 0.03, 0.01]).unwrap()
}

#[test]
fn growth_envelope_of_free_scalar() {
    let model = SpectralModel::single(1.0, 1.0).unwrap();
    let samples = growth_samples(&model);
    let env = verify_growth_estimate(&samples, 4, 4).unwrap();
    assert!(env.saturated, "{env:?}");
    assert!(env.m <= 2, "{env:?}");
    assert!(env.c.is_finite() && env.c > 0.0);

    let scaled: Vec<AnalyticSample> = samples.iter().map(|s| s.scaled(10.0)).collect();
    let env10 = verify_growth_estimate(&scaled, 4, 4).unwrap();
    assert_eq!((env10.n, env10.m), (env.n, env.m));
    assert!((env10.c / env.c - 10.0).abs() < 1e-10);
}

#[test]
fn growth_search_reports_unsaturated_envelope() {
    let model = SpectralModel::single(1.0, 1.0).unwrap();
    let samples = growth_samples(&model);
    let env = verify_growth_estimate(&samples, 0, 0).unwrap();
    assert!(!env.saturated);
    assert_eq!((env.n, env.m), (0, 0));
}

fn transport_basis() -> Vec<TestFunction> {
    vec![
        TestFunction::gaussian([1.0, 0.0, 0.0, 0.0], 0.1),
        TestFunction::gaussian([1.3, 0.4, 0.0, 0.0], 0.12),
        TestFunction::gaussian([0.9, -0.2, 0.3, 0.1], 0.1),
        TestFunction::gaussian([1.6, 0.0, 0.5, -0.3], 0.15),
    ]
}

#[test]
fn transport_gram_is_positive_and_matches_os_gram() {
    let model = SpectralModel::single(1.0, 1.0).unwrap();
    let basis = transport_basis();
    let m = transport_gram(&model, &basis).unwrap();
    let norm = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let eig = hermitian_eigenvalues(&m);
    assert!(eig.iter().all(|&e| e >= -1e-9 * norm), "{eig:?}");

    let fam = FreeScalar::new(1.0).unwrap();
    let direct = DMatrix::from_fn(basis.len(), basis.len(), |i, j| fam.two_point(&basis[i].theta(), &basis[j]).unwrap());
    let dev = m.iter().zip(direct.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(dev <= 1e-8 * norm, "deviation {dev:e} at scale {norm:e}");
}

#[test]
fn transport_gram_rejects_polynomial_bumps() {
    let model = SpectralModel::single(1.0, 1.0).unwrap();
    let f = TestFunction::gaussian([1.0, 0.0, 0.0, 0.0], 0.1);
    let g = f.derivative(1).unwrap();
    assert!(transport_gram(&model, &[f, g]).is_err());
}

#[test]
fn minkowski_cluster_rate_matches_euclidean_rate() {
    let model = SpectralModel::single(1.0, 1.0).unwrap();
    let lambdas: Vec<f64> = (0..9).map(|k| 2.0 + k as f64).collect();
    let mink = minkowski_cluster_fit(&model, &lambdas, &BoundaryOptions::default()).unwrap();
    let eucl: Vec<f64> = lambdas.iter().map(|&l| scalar_schwinger_2pt(1.0, &[0.0, l, 0.0, 0.0]).unwrap()).collect();
    let eucl = fit_decay(&lambdas, &eucl).unwrap();
    assert!((mink.rate / eucl.rate - 1.0).abs() <= 0.1, "{mink:?} vs {eucl:?}");
    assert!((eucl.rate - 1.0).abs() <= 0.05, "{eucl:?}");
}

#[test]
fn decay_fit_recovers_exact_form() {
    let l: Vec<f64> = (1..12).map(|k| k as f64 * 0.7).collect();
    let v: Vec<f64> = l.iter().map(|&x| 3.0 * (-0.8 * x).exp() * x.powf(-1.5)).collect();
    let fit = fit_decay(&l, &v).unwrap();
    assert!((fit.rate - 0.8).abs() < 1e-10 && (fit.power - 1.5).abs() < 1e-9 && fit.residual < 1e-12);
    assert!(fit_decay(&l[..2], &v[..2]).is_err());
}

#[test]
fn massless_component_is_exact() {
    let model = SpectralModel::new(vec![Pole { mass_sq: 0.0, weight: 2.0 }], None).unwrap();
    let x = [0.4, 1.1, 0.0, 0.0];
    let w = continue_to_wightman(&model, &x, &BoundaryOptions::default()).unwrap();
    let want = Complex64::new(2.0 / (4.0 * std::f64::consts::PI.powi(2) * (1.21 - 0.16)), 0.0);
    assert!((w - want).norm() < 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cone_membership_is_scale_and_permutation_invariant(v in prop::collection::vec(-3.0f64..3.0, 1..6), s in 0.01f64..100.0) {
        prop_assume!(v.iter().any(|x| x.abs() > 1e-6));
        let base = cone_member(&v).unwrap();
        let scaled: Vec<f64> = v.iter().map(|x| x * s).collect();
        prop_assert_eq!(cone_member(&scaled).unwrap(), base);
        let mut rev = v.clone();
        rev.reverse();
        prop_assert_eq!(cone_member(&rev).unwrap(), base);
    }

    #[test]
    fn single_exponential_is_recovered(rate in 0.2f64..3.0, amp in 0.1f64..10.0) {
        let taus = TimeMomentumData::default_taus();
        let values: Vec<f64> = taus.iter().map(|t| amp * (-rate * t).exp()).collect();
        let fit = fit_exponentials(&taus, &values, 2).unwrap();
        prop_assert!(fit.residual < 1e-8);
        let dominant = fit.amplitudes.iter().enumerate().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).unwrap().0;
        prop_assert!((fit.rates[dominant] - rate).abs() < 1e-6 * rate.max(1.0));
    }

    #[test]
    fn analytic_two_point_is_linear_in_weights(w1 in 0.1f64..3.0, w2 in 0.1f64..3.0, t in -2.0f64..2.0, r in 0.0f64..2.0) {
        let a = SpectralModel::single(1.0, w1).unwrap();
        let b = SpectralModel::single(1.5, w2).unwrap();
        let ab = SpectralModel::new(vec![a.poles[0], b.poles[0]], None).unwrap();
        let eta = 0.2;
        let va = analytic_two_point(&a, t, r, eta, 1e-12).unwrap().value;
        let vb = analytic_two_point(&b, t, r, eta, 1e-12).unwrap().value;
        let vab = analytic_two_point(&ab, t, r, eta, 1e-12).unwrap().value;
        prop_assert!((vab - va - vb).norm() <= 1e-12 * vab.norm().max(1.0));
    }
}
