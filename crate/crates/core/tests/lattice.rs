use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use qgv_core::axioms::*;
use qgv_core::correlator::{smear, CorrelatorFamily, FieldIndex, GridFunction, TestFunction};
use qgv_core::lattice::*;
use qgv_core::symmetry::GroupKind;
use qgv_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn run(dims: &[usize], group: GroupKind, action: Action, seed: u64, therm: usize, n: usize) -> RunParams {
    let mut p = RunParams::new(dims, group, action, seed, n);
    p.thermalization = Thermalization::Fixed { sweeps: therm };
    p
}

fn ensemble(dims: &[usize], group: GroupKind, beta: f64, seed: u64, therm: usize, n: usize) -> Ensemble {
    generate(&run(dims, group, Action::pure_gauge(beta), seed, therm, n)).unwrap()
}

fn thermalized(dims: &[usize], group: GroupKind, action: Action, sweeps: u64) -> LatticeConfig {
    let lat = Lattice::new(dims, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cfg = LatticeConfig::hot(&lat, group, action.matter.is_some(), &mut rng);
    for s in 0..sweeps {
        sweep(&mut cfg, &action, &UpdateParams::default(), 11, s);
    }
    cfg
}

// Oracles: single-link expectations of (1/N) Re tr U under exp((β/N) Re tr U)
// with Haar measure, by direct quadrature over class angles.

fn trapezoid_periodic(n: usize, f: impl Fn(f64) -> f64) -> f64 {
    (0..n).map(|k| f(2.0 * PI * k as f64 / n as f64)).sum::<f64>() * 2.0 * PI / n as f64
}

fn u1_oracle(beta: f64) -> f64 {
    let num = trapezoid_periodic(4000, |t| t.cos() * (beta * t.cos()).exp());
    let den = trapezoid_periodic(4000, |t| (beta * t.cos()).exp());
    num / den
}

fn su2_oracle(beta: f64) -> f64 {
    // class density sin²θ on [0, π]; extended evenly to a periodic integrand
    let w = |t: f64| t.sin().powi(2) * (beta * t.cos()).exp();
    trapezoid_periodic(4000, |t| t.cos() * w(t)) / trapezoid_periodic(4000, w)
}

fn su3_oracle(beta: f64) -> f64 {
    let n = 400;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let a = 2.0 * PI * i as f64 / n as f64;
            let b = 2.0 * PI * j as f64 / n as f64;
            let c = -a - b;
            let vandermonde = |x: f64, y: f64| 2.0 - 2.0 * (x - y).cos();
            let weight = vandermonde(a, b) * vandermonde(b, c) * vandermonde(a, c);
            let re_tr = a.cos() + b.cos() + c.cos();
            let w = weight * (beta / 3.0 * re_tr).exp();
            num += w * re_tr / 3.0;
            den += w;
        }
    }
    num / den
}

fn within(value: f64, error: f64, expected: f64, sigmas: f64) -> bool {
    (value - expected).abs() <= sigmas * error
}

#[test]
fn oracles_agree_with_known_limits() {
    assert!((u1_oracle(1.0) - 0.446_389_965_896_53).abs() < 1e-10);
    assert!((u1_oracle(1.0) - u1_single_plaquette(1.0).unwrap()).abs() < 1e-10);
    assert!((su2_oracle(0.01) - 0.01 / 4.0).abs() < 1e-6);
    assert!((su3_oracle(0.01) - 0.01 / 18.0).abs() < 1e-6);
}

#[test]
fn strong_coupling_limit_is_zero() {
    let ens = ensemble(&[4, 4, 4, 4], GroupKind::SU2, 0.0, 3, 5, 100);
    let (p, e) = plaquette_average(&ens).unwrap();
    assert!(p.abs() <= 4.0 * e, "{p} ± {e}");
}

#[test]
fn u1_two_dimensional_matches_the_character_expansion() {
    let ens = ensemble(&[16, 16], GroupKind::U1, 2.0, 5, 200, 400);
    let (p, e) = plaquette_average(&ens).unwrap();
    assert!(within(p, e, u1_oracle(2.0), 4.0), "{p} ± {e} vs {}", u1_oracle(2.0));
}

#[test]
fn u1_weak_coupling_approaches_the_gaussian_value() {
    let beta = 16.0;
    let exact = u1_oracle(beta);
    // 1 − 1/(2β) − 1/(8β²) + O(β⁻³)
    assert!((exact - (1.0 - 1.0 / (2.0 * beta) - 1.0 / (8.0 * beta * beta))).abs() < 2.0 / beta.powi(3));
    // a hot start freezes in winding that local updates cannot remove at this β
    let mut params = run(&[16, 16], GroupKind::U1, Action::pure_gauge(beta), 9, 300, 300);
    params.start = Start::Cold;
    let ens = generate(&params).unwrap();
    let (p, e) = plaquette_average(&ens).unwrap();
    assert!(within(p, e, exact, 4.0), "{p} ± {e} vs {exact}");
}

#[test]
fn su2_two_dimensional_heatbath_matches_quadrature() {
    let ens = ensemble(&[8, 8], GroupKind::SU2, 2.0, 13, 50, 400);
    let (p, e) = plaquette_average(&ens).unwrap();
    assert!(within(p, e, su2_oracle(2.0), 4.0), "{p} ± {e} vs {}", su2_oracle(2.0));
}

#[test]
fn su3_both_update_schemes_match_quadrature() {
    let expected = su3_oracle(4.0);
    for scheme in [Su3Update::CabibboMarinari, Su3Update::Metropolis] {
        let mut params = run(&[8, 8], GroupKind::SU3, Action::pure_gauge(4.0), 17, 60, 300);
        params.update.su3 = scheme;
        params.update.link_width = 0.4;
        let ens = generate(&params).unwrap();
        let (p, e) = plaquette_average(&ens).unwrap();
        assert!(within(p, e, expected, 4.0), "{scheme:?}: {p} ± {e} vs {expected}");
    }
}

#[test]
fn su2_plaquette_grows_with_beta() {
    let means: Vec<(f64, f64)> = [2.0, 4.0, 8.0]
        .iter()
        .map(|&b| plaquette_average(&ensemble(&[4, 4, 4, 4], GroupKind::SU2, b, 21, 30, 40)).unwrap())
        .collect();
    for w in means.windows(2) {
        assert!(w[1].0 - w[0].0 > 3.0 * (w[0].1 + w[1].1), "{means:?}");
    }
}

#[test]
fn sweeps_keep_links_unitary() {
    for group in [GroupKind::U1, GroupKind::SU2, GroupKind::SU3] {
        let cfg = thermalized(&[4, 4, 4, 4], group, Action::pure_gauge(2.0), 3);
        assert!(cfg.unitarity_defect() < 1e-12, "{group:?}");
        cfg.validate().unwrap();
    }
}

#[test]
fn generation_is_deterministic_and_regenerable() {
    let mut params = run(&[8, 8], GroupKind::U1, Action::pure_gauge(1.0), 4, 0, 10);
    params.thermalization = Thermalization::Adaptive { min_sweeps: 20, pilot: 30, factor: 10.0 };
    let a = generate(&params).unwrap();
    let b = generate(&params).unwrap();
    assert_eq!(a, b);
    assert!(a.provenance.thermalization_sweeps >= 30);
    assert!(a.provenance.tau_int_plaquette.is_some());
    let c = Ensemble::regenerate(&a.provenance).unwrap();
    assert_eq!(c.configs, a.configs);
    assert_eq!(c.provenance, a.provenance);
    params.seed = 5;
    assert_ne!(generate(&params).unwrap().configs, a.configs);
}

#[test]
fn higgs_generation_records_matter_acceptance() {
    let ens = generate(&run(&[4, 4, 4, 4], GroupKind::U1, Action::higgs(1.5, 0.3, 0.5), 6, 5, 5)).unwrap();
    assert!(ens.has_matter());
    let acc = ens.provenance.matter_acceptance.unwrap();
    assert!(acc > 0.05 && acc < 1.0, "{acc}");
    assert!(Action::higgs(1.0, 0.3, 0.5).validate(GroupKind::SU2).is_err());
}

fn gauge_cases() -> Vec<(GroupKind, Action, Vec<Observable>)> {
    let loops = vec![Observable::ActionDensity, Observable::PLAQUETTE, Observable::WilsonLoop { r: 2, t: 1 }, Observable::WilsonLoop { r: 1, t: 2 }];
    let mut with_matter = loops.clone();
    with_matter.push(Observable::PhiSquared);
    vec![
        (GroupKind::U1, Action::pure_gauge(1.0), loops.clone()),
        (GroupKind::SU2, Action::pure_gauge(2.3), loops.clone()),
        (GroupKind::SU3, Action::pure_gauge(5.7), loops),
        (GroupKind::U1, Action::higgs(1.0, 0.25, 0.5), with_matter),
    ]
}

#[test]
fn random_gauge_transformations_leave_observables_invariant() {
    for (group, action, observables) in gauge_cases() {
        let cfg = thermalized(&[4, 4, 4, 4], group, action, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let g = GaugeField::random(&cfg.lattice, group, &mut rng);
        let moved = gauge_transform(&cfg, &g).unwrap();
        assert!((moved.links[0] - cfg.links[0]).norm() > 1e-3, "{group:?}: transformation did nothing");
        let defect = observable_defect(&cfg, &moved, &observables).unwrap();
        assert!(defect <= 1e-12, "{group:?}: {defect:e}");
        let s0 = total_action(&cfg, &action);
        assert!((total_action(&moved, &action) - s0).abs() <= 1e-12 * s0.abs());
    }
}

#[test]
fn identity_gauge_transformation_is_bit_exact() {
    for (group, action, _) in gauge_cases() {
        let cfg = thermalized(&[4, 4, 4, 4], group, action, 1);
        let g = GaugeField::identity(&cfg.lattice, group);
        assert_eq!(gauge_transform(&cfg, &g).unwrap(), cfg);
    }
}

#[test]
fn family_gauge_defect_is_at_rounding_level() {
    let ens = Arc::new(generate(&run(&[4, 4, 4, 4], GroupKind::U1, Action::higgs(1.0, 0.25, 0.5), 8, 5, 20)).unwrap());
    let fam = LatticeFamily::standard(ens).unwrap();
    assert!(fam.gauge_invariance_defect(3).unwrap().unwrap() <= 1e-12);
}

#[test]
fn link_reflection_matches_footprint_reflection() {
    for (group, action, observables) in gauge_cases() {
        let cfg = thermalized(&[8, 4, 4, 4], group, action, 1);
        let refl = reflect_links(&cfg);
        assert_eq!(reflect_links(&refl), cfg);
        for o in &observables {
            let f = o.field(&cfg).unwrap();
            let fr = o.field(&refl).unwrap();
            let dims = cfg.lattice.dims().to_vec();
            let mut g = GridFunction::zeros(&dims, 1.0);
            for (i, v) in f.iter().enumerate() {
                g.values[i] = Complex64::new(*v, 0.0);
            }
            let moved = reflect_grid(&g, o.footprint());
            for (i, v) in fr.iter().enumerate() {
                assert!((moved.values[i].re - v).abs() < 1e-12, "{group:?} {o}: site {i}");
            }
        }
    }
}

#[test]
fn wilson_1x1_equals_the_plaquette_average() {
    let ens = Arc::new(ensemble(&[8, 8], GroupKind::U1, 1.0, 23, 50, 200));
    let (p, e) = plaquette_average(&ens).unwrap();
    let fam = LatticeFamily::standard(ens.clone()).unwrap();
    let dims = ens.lattice().dims().to_vec();
    let mut all = GridFunction::zeros(&dims, 1.0);
    all.values.iter_mut().for_each(|v| *v = Complex64::new(1.0 / all_len(&dims), 0.0));
    let w = smear(&fam, &FieldIndex::scalar("W1x1", 1), &[TestFunction::Grid(all)]).unwrap();
    assert!((w.value.re - p).abs() <= 3.0 * e.max(w.stderr), "{} vs {p}", w.value.re);
}

fn all_len(dims: &[usize]) -> f64 {
    dims.iter().product::<usize>() as f64
}

#[test]
fn separation_correlators() {
    let ens = Arc::new(generate(&run(&[8, 8, 8, 8], GroupKind::U1, Action::higgs(1.0, 0.3, 0.5), 31, 20, 60)).unwrap());
    let fam = LatticeFamily::standard(ens).unwrap().with_bins(10);
    let zero = fam.separation_correlator(PHI_SQUARED, &[vec![0, 0, 0, 0]], None).unwrap();
    assert!(zero[0].full > 0.0 && zero[0].connected >= 0.0);

    let far = fam.separation_correlator(ACTION_DENSITY, &[vec![0, 4, 0, 0], vec![4, 4, 4, 4]], None).unwrap();
    for p in &far {
        assert!(p.connected.abs() <= 4.0 * p.connected_error, "{p:?}");
    }
    let near = fam.separation_correlator(ACTION_DENSITY, &[vec![0, 1, 0, 0]], None).unwrap();
    assert!(near[0].connected > far[0].connected);

    let a = fam.separation_correlator(ACTION_DENSITY, &[vec![0, 1, 0, 0]], Some(0)).unwrap();
    let b = fam.separation_correlator(ACTION_DENSITY, &[vec![0, 1, 0, 0]], Some(3)).unwrap();
    let err = (a[0].full_error.powi(2) + b[0].full_error.powi(2)).sqrt();
    assert!((a[0].full - b[0].full).abs() <= 3.0 * err);

    match fam.separation_correlator(ACTION_DENSITY, &[vec![5, 0, 0, 0]], None) {
        Err(Error::SeparationTooLarge { separation: 5, half: 4 }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn incompatible_observables_are_rejected() {
    let ens = Arc::new(ensemble(&[4, 4], GroupKind::U1, 1.0, 1, 1, 2));
    assert!(LatticeFamily::new(ens.clone(), &[Observable::PhiSquared]).is_err());
    assert!(LatticeFamily::new(ens, &[Observable::WilsonLoop { r: 3, t: 1 }]).is_err());
    assert_eq!("W2x3".parse::<Observable>().unwrap(), Observable::WilsonLoop { r: 2, t: 3 });
    assert_eq!("plaquette".parse::<Observable>().unwrap(), Observable::PLAQUETTE);
    assert!("W0x1".parse::<Observable>().is_err());
}

/// Single-link Metropolis on a discretized angle: forward and reverse
/// transition counts between every pair of states must agree.
#[test]
fn u1_link_update_satisfies_detailed_balance() {
    let cfg = thermalized(&[4, 4], GroupKind::U1, Action::pure_gauge(1.0), 5);
    let b = staple::<1>(&cfg, 0, 0)[(0, 0)] * 1.5;
    let k = 12;
    let states: Vec<Complex64> = (0..k).map(|i| Complex64::from_polar(1.0, 2.0 * PI * i as f64 / k as f64)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut counts = vec![vec![0u64; k]; k];
    let mut visits = vec![0u64; k];
    let mut cur = 0;
    for _ in 0..400_000 {
        let next = rng.random_range(0..k);
        let to = if u1_accept(states[cur], states[next], b, &mut rng) { next } else { cur };
        counts[cur][to] += 1;
        visits[to] += 1;
        cur = to;
    }
    let mut chi2 = 0.0;
    let mut dof = 0;
    for i in 0..k {
        for j in i + 1..k {
            let (a, c) = (counts[i][j] as f64, counts[j][i] as f64);
            if a + c > 0.0 {
                chi2 += (a - c).powi(2) / (a + c);
                dof += 1;
            }
        }
    }
    let p = 1.0 - ChiSquared::new(dof as f64).unwrap().cdf(chi2);
    assert!(p > 0.01, "chi2 {chi2} over {dof} pairs, p = {p}");

    let weights: Vec<f64> = states.iter().map(|u| (u * b).re.exp()).collect();
    let z: f64 = weights.iter().sum();
    let total: u64 = visits.iter().sum();
    for (w, v) in weights.iter().zip(&visits) {
        let expected = w / z;
        let seen = *v as f64 / total as f64;
        assert!((seen - expected).abs() < 0.01, "{seen} vs {expected}");
    }
}

#[test]
fn store_round_trip_and_corruption() {
    let dir = std::env::temp_dir().join(format!("qgv-store-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("higgs.qgv");
    let ens = generate(&run(&[4, 4, 4, 4], GroupKind::U1, Action::higgs(1.0, 0.3, 0.5), 41, 3, 4)).unwrap();
    write_ensemble(&path, &ens).unwrap();
    assert!(sidecar_path(&path).exists());
    let back = read_ensemble(&path).unwrap();
    assert_eq!(back, ens);

    let su3 = ensemble(&[4, 4, 4, 4], GroupKind::SU3, 5.5, 42, 2, 2);
    let p3 = dir.join("su3.qgv");
    write_ensemble(&p3, &su3).unwrap();
    assert_eq!(read_ensemble(&p3).unwrap(), su3);

    let mut bytes = std::fs::read(&path).unwrap();
    let last = bytes.len() - 3;
    bytes[last] ^= 0x40;
    std::fs::write(&path, &bytes).unwrap();
    assert!(matches!(read_ensemble(&path), Err(Error::Store(_))));

    bytes[0] = b'X';
    std::fs::write(&path, &bytes).unwrap();
    assert!(matches!(read_ensemble(&path), Err(Error::Store(_))));
    std::fs::remove_dir_all(&dir).unwrap();
}

fn u1_family(dims: &[usize], beta: f64, n: usize) -> Arc<LatticeFamily> {
    Arc::new(LatticeFamily::standard(Arc::new(ensemble(dims, GroupKind::U1, beta, 51, 100, n))).unwrap())
}

/// In two dimensions distinct plaquettes are independent, so the exact Gram of
/// time-slice strings is `⟨S⟩² J` with `⟨S⟩ = L I₁(β)/I₀(β)`: one eigenvalue
/// `n ⟨S⟩²`, the rest zero.
#[test]
fn os_gram_of_plaquette_strings_is_rank_one() {
    let fam = u1_family(&[16, 16], 1.0, 400);
    let basis = qgv_core::axioms::grid::grid_os_basis(fam.as_ref()).unwrap();
    assert_eq!(basis.len(), 4);
    let gram = os_gram(fam.as_ref(), &basis).unwrap();
    let slice = 16.0 * u1_oracle(1.0);
    let top = gram.eigenvalues[3];
    assert!(within(top, gram.eigen_errors[3], 4.0 * slice * slice, 4.0), "{top} ± {}", gram.eigen_errors[3]);
    for k in 0..3 {
        assert!(gram.eigenvalues[k].abs() <= 4.0 * gram.eigen_errors[k], "{:?} ± {:?}", gram.eigenvalues, gram.eigen_errors);
    }
}

#[test]
fn os_basis_rejects_functionals_crossing_the_plane() {
    let fam = u1_family(&[8, 8], 1.0, 20);
    let dims = [8, 8];
    let crossing = qgv_core::axioms::grid::time_slice(&dims, 3);
    let probe = Probe { idx: FieldIndex::scalar("W1x1", 1), args: vec![crossing] };
    assert!(matches!(os_gram(fam.as_ref(), &[probe]), Err(Error::SupportViolation(_))));
    let ok = qgv_core::axioms::grid::time_slice(&dims, 2);
    assert_eq!(fam.negative_time_leakage(Some("W1x1"), &ok).unwrap(), 0.0);
    assert!(fam.negative_time_leakage(Some(ACTION_DENSITY), &qgv_core::axioms::grid::time_slice(&dims, 0)).unwrap() > 0.0);
}

#[test]
fn suite_on_a_lattice_family() {
    let mut params = run(&[8, 8, 8, 8], GroupKind::U1, Action::higgs(1.0, 0.3, 0.5), 60, 20, 200);
    params.sweeps_per_config = 4;
    let ens = Arc::new(generate(&params).unwrap());
    let fam: Arc<dyn CorrelatorFamily> = Arc::new(LatticeFamily::standard(ens).unwrap());
    let reports = run_suite(fam, &AxiomId::EUCLIDEAN, &SuiteInputs::default());
    for r in &reports {
        match r.axiom {
            AxiomId::TemporalSupport | AxiomId::LinearGrowth => assert_eq!(r.verdict, Verdict::Inapplicable, "{}", r.axiom.name()),
            _ => assert_eq!(r.verdict, Verdict::Pass, "{} {:?} {:?}", r.axiom.name(), r.reason, r.quantities),
        }
    }
    let pos = reports.iter().find(|r| r.axiom == AxiomId::RenormalizedPositivity).unwrap();
    assert!(pos.quantities.contains_key("pos1:phi2"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gauge_invariance_for_any_seed(seed in any::<u64>(), which in 0usize..4) {
        let (group, action, observables) = gauge_cases().swap_remove(which);
        let lat = Lattice::new(&[4, 4, 4, 4], 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = LatticeConfig::hot(&lat, group, action.matter.is_some(), &mut rng);
        let g = GaugeField::random(&lat, group, &mut rng);
        let moved = gauge_transform(&cfg, &g).unwrap();
        prop_assert!(observable_defect(&cfg, &moved, &observables).unwrap() <= 1e-12);
        prop_assert!(moved.unitarity_defect() <= 1e-12);
    }

    #[test]
    fn reflection_is_an_involution_on_grids(t in 0usize..8, x in 0usize..4, lo in -1i64..1, hi in 0i64..3) {
        let mut g = GridFunction::zeros(&[8, 4], 1.0);
        let i = g.site_index(&[t, x]);
        g.values[i] = Complex64::new(1.0, 0.5);
        let twice = reflect_grid(&reflect_grid(&g, (lo, hi)), (lo, hi));
        prop_assert_eq!(twice.values, g.values);
    }

    #[test]
    fn site_streams_are_reproducible(seed in any::<u64>(), sweep_index in any::<u64>(), site in 0usize..4096, slot in 0usize..5) {
        let a: u64 = site_stream(seed, sweep_index, site, slot).random();
        let b: u64 = site_stream(seed, sweep_index, site, slot).random();
        let c: u64 = site_stream(seed, sweep_index, site, slot + 1).random();
        prop_assert_eq!(a, b);
        prop_assert_ne!(a, c);
    }
}
