use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use qgv_core::correlator::{smear, CorrelatorFamily, FieldIndex, TestFunction};
use qgv_core::free_field::*;
use qgv_core::gauge_action::GaussianPhase;
use qgv_core::linalg::hermitian_eigenvalues;
use qgv_core::reconstruction::*;
use qgv_core::symmetry::random_spatial;
use qgv_core::Error;
use rand::rngs::StdRng;
use rand::SeedableRng;

const W: f64 = 0.15;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn scalar() -> Arc<dyn CorrelatorFamily> {
    Arc::new(FreeScalar::new(1.0).unwrap())
}

fn bump(t: f64, x: f64) -> TestFunction {
    TestFunction::gaussian([t, x, 0.0, 0.0], W)
}

fn tests() -> Vec<TestFunction> {
    vec![bump(1.2, 0.0), bump(1.5, 0.4)]
}

fn phi(args: &[TestFunction]) -> SequenceVector {
    SequenceVector::monomial(FieldIndex::scalar(PHI, args.len()), args.to_vec()).unwrap()
}

fn unit(n: usize, k: usize) -> Vec<Complex64> {
    (0..n).map(|i| c(if i == k { 1.0 } else { 0.0 })).collect()
}

#[test]
fn vacuum_alone_has_unit_gram() {
    let b = build_borchers(scalar(), vec![SequenceVector::vacuum()]).unwrap();
    assert_eq!(b.gram.entries[(0, 0)], c(1.0));
}

#[test]
fn odd_states_are_orthogonal_to_the_vacuum() {
    let f = bump(1.2, 0.0);
    let b = build_borchers(scalar(), vec![SequenceVector::vacuum(), phi(&[f])]).unwrap();
    assert_eq!(b.gram.entries[(0, 1)], c(0.0));
    assert_eq!(b.gram.entries[(1, 0)], c(0.0));
    assert!(b.gram.entries[(1, 1)].re > 0.0);
}

#[test]
fn one_particle_norm_matches_direct_smearing() {
    let f = bump(1.2, 0.1);
    let v = phi(&[f.clone()]);
    let norm = pairing(scalar().as_ref(), &v, &v).unwrap().value;
    let direct = smear(scalar().as_ref(), &FieldIndex::scalar(PHI, 2), &[f.theta(), f]).unwrap().value;
    assert!((norm - direct).norm() <= 1e-14 * direct.norm(), "{norm} {direct}");
}

#[test]
fn feynman_gauge_sector_is_indefinite() {
    let fam: Arc<dyn CorrelatorFamily> = Arc::new(FeynmanPhoton::new());
    let f = bump(1.2, 0.0);
    let basis: Vec<SequenceVector> =
        (0..2).map(|mu| SequenceVector::monomial(FieldIndex::gauge(&[(0, mu)]), vec![f.clone()]).unwrap()).collect();
    let b = build_borchers(fam.clone(), basis).unwrap();
    let ev = hermitian_eigenvalues(&b.gram.entries);
    assert!(ev[0] < 0.0 && ev[1] > 0.0, "{ev:?}");
    assert!((ev[0] + ev[1]).abs() <= 1e-12 * ev[1], "{ev:?}");
    let err = physical_from_basis(fam, b.basis.clone(), &PhysicalOptions::default()).unwrap_err();
    assert!(matches!(err, Error::PositivityViolation { .. }), "{err}");
}

#[test]
fn pairing_is_sesquilinear() {
    let fam = scalar();
    let fs = tests();
    let a = phi(&fs[..1]);
    let b = phi(&fs[1..]);
    let d = phi(&fs);
    let (x, y) = (Complex64::new(0.3, -1.1), Complex64::new(-0.7, 0.4));
    let combo = a.scale(x).add(&b.scale(y));
    let lhs = pairing(fam.as_ref(), &d, &combo).unwrap().value;
    let rhs = x * pairing(fam.as_ref(), &d, &a).unwrap().value + y * pairing(fam.as_ref(), &d, &b).unwrap().value;
    assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    let anti = pairing(fam.as_ref(), &combo, &d).unwrap().value;
    let expect = x.conj() * pairing(fam.as_ref(), &a, &d).unwrap().value + y.conj() * pairing(fam.as_ref(), &b, &d).unwrap().value;
    assert!((anti - expect).norm() <= 1e-12 * (1.0 + expect.norm()));
}

/// Every scalar monomial of degree ≤ 4 the free-scalar rules evaluate.
fn monomials() -> Vec<SequenceVector> {
    let fs = [bump(1.2, 0.0), bump(1.4, -0.3), bump(1.3, 0.5), bump(1.6, 0.2)];
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(phi(&fs[..n]));
    }
    let comp = |k: usize, n_phi: usize| {
        let mut idx = FieldIndex::scalar(PHI, n_phi);
        idx.matter.extend(FieldIndex::scalar(PHI_SQUARED, k).matter);
        SequenceVector::monomial(idx, fs[..n_phi + k].to_vec()).unwrap()
    };
    out.push(comp(1, 0));
    out.push(comp(2, 0));
    out.push(comp(1, 1));
    out.push(comp(1, 3));
    out
}

#[test]
fn vacuum_row_reproduces_expectation_values() {
    let fam = scalar();
    let omega = SequenceVector::vacuum();
    let rows: Vec<Complex64> = monomials()
        .iter()
        .map(|v| {
            let direct = direct_smear(fam.as_ref(), v).unwrap().value;
            let via_pairing = pairing(fam.as_ref(), &omega, v).unwrap().value;
            let via_vev = vev(fam.as_ref(), v).unwrap().value;
            assert!((via_pairing - direct).norm() <= 1e-12 * direct.norm(), "{v:?}: {via_pairing} {direct}");
            assert!((via_vev - direct).norm() <= 1e-12 * direct.norm());
            direct
        })
        .collect();
    // φ² and φ⁴ are positive sums of pairings; odd numbers of φ slots vanish
    assert!(rows[1].re > 0.0 && rows[3].re > 0.0 && rows[5].re > 0.0);
    for k in [0, 2, 4, 6, 7] {
        assert_eq!(rows[k], c(0.0), "{k}");
    }
    let b = build_borchers(fam, vec![omega, monomials()[1].clone(), monomials()[3].clone()]).unwrap();
    assert!((b.gram.entries[(0, 2)] - rows[3]).norm() <= 1e-12 * rows[3].norm());
}

#[test]
fn vev_oracle_for_the_two_point_monomial() {
    // (2πW²)⁴ ∫ d⁴p/(2π)⁴ e^{-p²W²} e^{ip·Δ} / (p² + 1) with a Schwinger parameter s,
    // then s = e^u so the trapezoid rule converges geometrically
    let (f, g) = (bump(1.2, 0.0), bump(1.5, 0.4));
    let delta2: f64 = 0.3f64.powi(2) + 0.4f64.powi(2);
    let norm = (2.0 * PI * W * W).powi(4);
    let integrand = |u: f64| {
        let s = u.exp();
        let a = s + W * W;
        s * (-s).exp() * (-delta2 / (4.0 * a)).exp() / (16.0 * PI * PI * a * a)
    };
    let (lo, hi, n) = (-40.0, 5.0, 6000);
    let h = (hi - lo) / n as f64;
    let sum: f64 = (0..=n).map(|k| integrand(lo + k as f64 * h)).sum();
    let oracle = norm * sum * h;
    let got = vev(scalar().as_ref(), &phi(&[f, g])).unwrap().value;
    assert!((got.re - oracle).abs() <= 1e-8 * oracle, "{got} {oracle}");
    assert!(got.im.abs() <= 1e-14 * oracle);
}

#[test]
fn duplicated_generator_is_null_and_quotient_is_definite() {
    let fam = scalar();
    let fs = tests();
    let basis = vec![SequenceVector::vacuum(), phi(&fs[..1]), phi(&fs[1..]), phi(&fs[..1]).scale(c(2.0))];
    let space = physical_from_basis(fam, basis, &PhysicalOptions::default()).unwrap();
    assert_eq!(space.null_dim, 1);
    assert_eq!(space.dim(), 3);
    assert!(space.min_metric_eigenvalue() > 0.0);
    assert!((space.vacuum_norm() - 1.0).abs() <= 1e-14);
    assert!(space.cauchy_schwarz_defect() <= 1e-10, "{}", space.cauchy_schwarz_defect());
    let defect = space.operator_on_null_defect(&FieldOperator::matter(PHI, 0), &bump(1.3, 0.2)).unwrap();
    assert!(defect <= 1e-8, "{defect}");
}

#[test]
fn quotient_reproduces_the_gram() {
    for backend in [QuotientBackend::Eigen, QuotientBackend::PivotedCholesky] {
        let opts = PhysicalOptions { backend, ..Default::default() };
        let space = build_physical(scalar(), &tests(), &opts).unwrap();
        let g = &space.borchers.gram.entries;
        let q = space.quotient_gram();
        let scale = space.spectrum.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let diff = (g - &q).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff <= 1e-10 * scale, "{backend:?}: {diff}");
        assert!(space.min_metric_eigenvalue() > 0.0);
    }
}

#[test]
fn normalized_generators_span_a_full_rank_quotient() {
    let unit = |t: f64, x: f64| bump(t, x).scale(c((2.0 * PI * W * W).powi(-2)));
    let space = build_physical(scalar(), &[unit(1.2, 0.0), unit(1.5, 0.4)], &PhysicalOptions::default()).unwrap();
    assert_eq!(space.basis().len(), 6);
    assert_eq!(space.null_dim, 0);
    assert_eq!(space.gram_rank(), 6);
    assert!(space.min_metric_eigenvalue() > space.threshold);
}

#[test]
fn generators_cover_neutral_fields_and_composites() {
    let fam = scalar();
    let opts = PhysicalOptions { composites: true, ..Default::default() };
    let gens = gauge_invariant_generators(fam.as_ref(), &tests(), &opts).unwrap();
    // Ω, two φ(f), three φφ, two :φ²:
    assert_eq!(gens.len(), 1 + 2 + 3 + 2);
    let charged: Arc<dyn CorrelatorFamily> = Arc::new(ChargedScalar::new(1.0).unwrap());
    let gens = gauge_invariant_generators(charged.as_ref(), &tests(), &opts).unwrap();
    assert_eq!(gens.len(), 1 + 2);
    let complex = TestFunction::gaussian([1.2, 0.0, 0.0, 0.0], W).scale(Complex64::new(0.0, 1.0));
    assert!(gauge_invariant_generators(fam.as_ref(), &[complex], &opts).is_err());
}

#[test]
fn maxwell_composite_sector_is_positive() {
    let fam: Arc<dyn CorrelatorFamily> = Arc::new(FreeMaxwell::new());
    let opts = PhysicalOptions { elementary_degree: 1, composites: true, ..Default::default() };
    let space = build_physical(fam, &tests(), &opts).unwrap();
    let scale = space.spectrum.last().unwrap().abs();
    assert!(space.spectrum[0] >= -1e-10 * scale, "{:?}", space.spectrum);
    assert!(space.dim() >= 3);
}

#[test]
fn field_operator_respects_the_degree_cap() {
    let v = phi(&tests());
    let op = FieldOperator::matter(PHI, 0).with_cap(2);
    let err = apply_field(&op, &v, &bump(1.3, 0.0)).unwrap_err();
    assert!(matches!(err, Error::CapExceeded { cap: 2 }), "{err}");
    let big = phi(&[bump(1.2, 0.0), bump(1.2, 0.1), bump(1.2, 0.2), bump(1.2, 0.3), bump(1.2, 0.4)]);
    let err = build_borchers(scalar(), vec![big]).unwrap_err();
    assert!(matches!(err, Error::DegreeCap { .. }), "{err}");
}

#[test]
fn field_operator_builds_monomials() {
    let fs = tests();
    let built = monomial_on_vacuum(&FieldOperator::matter(PHI, 0), &fs).unwrap();
    let direct = phi(&fs);
    let fam = scalar();
    let a = pairing(fam.as_ref(), &built, &built).unwrap().value;
    let b = pairing(fam.as_ref(), &direct, &direct).unwrap().value;
    assert!((a - b).norm() <= 1e-13 * b.norm());
}

#[test]
fn spatial_motions_are_isometric_and_fix_the_vacuum() {
    let mut rng = StdRng::seed_from_u64(11);
    let maxwell: Arc<dyn CorrelatorFamily> = Arc::new(FreeMaxwell::new());
    let f_basis = vec![
        SequenceVector::vacuum(),
        SequenceVector::monomial(FieldIndex::matter(&[(FIELD_STRENGTH, 1)]), vec![bump(1.2, 0.0)]).unwrap(),
        SequenceVector::monomial(FieldIndex::matter(&[(FIELD_STRENGTH, 3)]), vec![bump(1.4, 0.3)]).unwrap(),
    ];
    let cases: Vec<(Arc<dyn CorrelatorFamily>, Vec<SequenceVector>)> = vec![
        (scalar(), vec![SequenceVector::vacuum(), phi(&tests()[..1]), phi(&tests())]),
        (maxwell, f_basis),
    ];
    for (fam, basis) in cases {
        for _ in 0..3 {
            let g = random_spatial::<f64, _>(&mut rng, 0.5);
            let moved: Vec<SequenceVector> = basis.iter().map(|v| act_poincare(fam.as_ref(), &g, v).unwrap()).collect();
            assert_eq!(moved[0], SequenceVector::vacuum());
            let a = build_borchers(fam.clone(), basis.clone()).unwrap();
            let b = build_borchers(fam.clone(), moved).unwrap();
            let scale = hermitian_eigenvalues(&a.gram.entries).last().unwrap().abs();
            let diff = (&a.gram.entries - &b.gram.entries).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(diff <= 1e-8 * scale, "{}: {diff}", fam.id());
        }
    }
}

#[test]
fn time_moving_motions_are_refused() {
    let mut rng = StdRng::seed_from_u64(2);
    let g = qgv_core::symmetry::random_euclidean::<f64, _>(&mut rng, 0.5);
    assert!(!is_spatial(&g));
    assert!(act_poincare(scalar().as_ref(), &g, &phi(&tests()[..1])).is_err());
}

/// `∫ f ∂_μ ε` for Gaussians, from the product-of-Gaussians moment formula.
fn shift_oracle(f_center: [f64; 4], s: f64, phase: &GaussianPhase, mu: usize) -> Complex64 {
    let w = phase.width;
    let t = s * s + w * w;
    let d2: f64 = (0..4).map(|k| (f_center[k] - phase.center[k]).powi(2)).sum();
    let mass = (2.0 * PI * s * s * w * w / t).powi(2) * (-d2 / (2.0 * t)).exp();
    let m_minus_c = (f_center[mu] - phase.center[mu]) * w * w / t;
    let value = -phase.amplitude / (w * w) * m_minus_c * mass;
    if mu == 0 {
        Complex64::new(0.0, -value)
    } else {
        c(value)
    }
}

#[test]
fn photon_slots_shift_by_the_phase_gradient() {
    let fam: Arc<dyn CorrelatorFamily> = Arc::new(FeynmanPhoton::new());
    let phase = GaussianPhase::new(0.3, [1.0, 0.2, -0.1, 0.0], 0.6).unwrap();
    let center = [1.2, 0.0, 0.1, 0.0];
    for mu in 0..4 {
        let v = SequenceVector::monomial(FieldIndex::gauge(&[(0, mu)]), vec![TestFunction::gaussian(center, W)]).unwrap();
        let (moved, _) = act_gauge(fam.as_ref(), &AbelianGauge::Gaussian(phase), &v).unwrap();
        let shift: Complex64 = moved.terms.iter().filter(|t| t.idx.is_empty()).map(|t| t.coeff).sum();
        let oracle = shift_oracle(center, W, &phase, mu);
        assert!((shift - oracle).norm() <= 1e-12 * oracle.norm().max(1e-12), "μ={mu}: {shift} {oracle}");
        assert_eq!(moved.terms.len(), if oracle == c(0.0) { 1 } else { 2 });
    }
}

#[test]
fn gauge_actions_preserve_invariant_states() {
    let charged: Arc<dyn CorrelatorFamily> = Arc::new(ChargedScalar::new(1.0).unwrap());
    let fs = tests();
    let pair = SequenceVector::monomial(FieldIndex::matter(&[(PHI, 0), (PHI_BAR, 0)]), fs.clone()).unwrap();
    let density = apply_field(&FieldOperator::composite(CHARGE_DENSITY), &SequenceVector::vacuum(), &fs[0]).unwrap();
    let charged_phi = SequenceVector::monomial(FieldIndex::matter(&[(PHI, 0)]), fs[1..].to_vec()).unwrap();
    let bases = [vec![SequenceVector::vacuum(), pair, charged_phi], vec![SequenceVector::vacuum(), density]];
    let gauges = [AbelianGauge::Constant { theta: 0.0 }, AbelianGauge::Constant { theta: 0.83 }];
    for basis in &bases {
        let before = build_borchers(charged.clone(), basis.clone()).unwrap();
        for g in &gauges {
            let moved: Vec<SequenceVector> = basis.iter().map(|v| act_gauge(charged.as_ref(), g, v).unwrap().0).collect();
            let after = build_borchers(charged.clone(), moved).unwrap();
            let diff = (&before.gram.entries - &after.gram.entries).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(diff <= 1e-8 * before.gram.norm(), "{g:?}: {diff}");
        }
    }
    // composites are neutral, so a local phase leaves the physical sector alone
    let phase = GaussianPhase::new(0.4, [1.3, 0.0, 0.0, 0.0], 0.8).unwrap();
    let opts = PhysicalOptions { composites: true, ..Default::default() };
    let physical = build_physical(charged.clone(), &fs, &opts).unwrap();
    assert_eq!(physical.basis().len(), 3);
    let moved: Vec<SequenceVector> =
        physical.basis().iter().map(|v| act_gauge(charged.as_ref(), &AbelianGauge::Gaussian(phase), v).unwrap().0).collect();
    let after = physical_from_basis(charged, moved, &opts).unwrap();
    let diff = (&physical.borchers.gram.entries - &after.borchers.gram.entries).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(diff <= 1e-8 * physical.borchers.gram.norm());
}

#[test]
fn identity_gauge_is_exact_on_charged_states() {
    let charged: Arc<dyn CorrelatorFamily> = Arc::new(ChargedScalar::new(1.0).unwrap());
    let v = SequenceVector::monomial(FieldIndex::matter(&[(PHI, 0), (PHI_BAR, 0)]), tests()).unwrap();
    let (moved, err) = act_gauge(charged.as_ref(), &AbelianGauge::Gaussian(GaussianPhase::identity()), &v).unwrap();
    let a = pairing(charged.as_ref(), &v, &v).unwrap().value;
    let b = pairing(charged.as_ref(), &moved, &moved).unwrap().value;
    assert!((a - b).norm() <= 1e-14 * a.norm());
    assert!(err <= 1e-16);
}

#[test]
fn reconstructions_agree_up_to_a_unitary() {
    let fam = scalar();
    let a = build_physical(fam.clone(), &tests(), &PhysicalOptions::default()).unwrap();

    let same = build_physical(fam.clone(), &tests(), &PhysicalOptions::default()).unwrap();
    let r = verify_uniqueness(&a, &same).unwrap();
    assert_eq!(r.permutation, (0..a.basis().len()).collect::<Vec<_>>());
    let id = qgv_core::linalg::CMatrix::identity(a.dim(), a.dim());
    assert!(qgv_core::linalg::max_abs_diff(&r.intertwiner, &id) <= 1e-10);

    let mut reordered = a.basis().to_vec();
    reordered.reverse();
    let b = physical_from_basis(fam.clone(), reordered, &PhysicalOptions::default()).unwrap();
    let r = verify_uniqueness(&a, &b).unwrap();
    let n = a.basis().len();
    assert_eq!(r.permutation, (0..n).rev().collect::<Vec<_>>());
    assert!(r.isometry_defect <= 1e-10 && r.vacuum_defect <= 1e-10, "{r:?}");

    let opts = PhysicalOptions { backend: QuotientBackend::PivotedCholesky, ..Default::default() };
    let chol = build_physical(fam, &tests(), &opts).unwrap();
    let r = verify_uniqueness(&a, &chol).unwrap();
    assert!(r.isometry_defect <= 1e-10, "{}", r.isometry_defect);
    assert!(r.gram_defect <= 1e-10, "{}", r.gram_defect);
    assert!(r.vacuum_defect <= 1e-10, "{}", r.vacuum_defect);
}

#[test]
fn mismatched_quotients_are_reported() {
    let fam = scalar();
    let fs = tests();
    let basis = vec![SequenceVector::vacuum(), phi(&fs[..1]), phi(&fs[1..])];
    let a = physical_from_basis(fam.clone(), basis.clone(), &PhysicalOptions::default()).unwrap();
    let b = physical_from_basis(fam, basis, &PhysicalOptions { null_eps: 0.5, ..Default::default() }).unwrap();
    let err = verify_uniqueness(&a, &b).unwrap_err();
    assert!(matches!(err, Error::DimensionMismatchSpaces { .. }), "{err}");
}

#[test]
fn reconstruction_needs_reflection_support() {
    let basis = vec![phi(&[bump(0.0, 0.0)])];
    let err = physical_from_basis(scalar(), basis, &PhysicalOptions::default()).unwrap_err();
    assert!(matches!(err, Error::SupportViolation { .. }), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gram_is_hermitian_and_positive(t1 in 1.0f64..2.0, t2 in 1.0f64..2.0, x in -1.0f64..1.0, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let fam = scalar();
        let a = phi(&[bump(t1, 0.0)]);
        let b = phi(&[bump(t2, x)]).scale(Complex64::new(re, im));
        let basis = vec![SequenceVector::vacuum(), a.clone(), b.clone(), phi(&[bump(t1, 0.0), bump(t2, x)])];
        let bs = build_borchers(fam, basis).unwrap();
        let g = &bs.gram.entries;
        let herm = (g - g.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(herm <= 1e-12 * bs.gram.norm());
        let ev = hermitian_eigenvalues(g);
        prop_assert!(ev[0] >= -1e-10 * ev.last().unwrap().abs());
    }

    #[test]
    fn quotient_inner_matches_gram(k in 0usize..8, l in 0usize..8) {
        let space = build_physical(scalar(), &tests(), &PhysicalOptions::default()).unwrap();
        let n = space.basis().len();
        let (a, b) = (unit(n, k % n), unit(n, l % n));
        let direct = space.borchers.inner(&a, &b);
        let quotient = space.inner(&a, &b);
        prop_assert!((direct - quotient).norm() <= 1e-10 * space.borchers.gram.norm());
    }
}
