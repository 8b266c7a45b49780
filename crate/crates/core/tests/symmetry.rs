use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qgv_core::symmetry::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type C = DMatrix<Complex64>;

fn max_abs(m: &C) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// Independent exponential: scaling and squaring with a long Taylor series.
fn expm_oracle(x: &C) -> C {
    let n = x.nrows();
    let norm = max_abs(x) * n as f64;
    let s = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let y = x / c(2f64.powi(s), 0.0);
    let mut term = C::identity(n, n);
    let mut sum = C::identity(n, n);
    for k in 1..30 {
        term = &term * &y / c(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

fn pauli(k: usize) -> C {
    match k {
        0 => C::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        1 => C::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        _ => C::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
    }
}

#[test]
fn u1_structure_constants_vanish() {
    let sc = structure_constants::<f64>(GroupKind::U1);
    assert!(sc.is_zero());
    assert_eq!(adjoint_generator::<f64>(GroupKind::U1, 0).unwrap(), C::zeros(1, 1));
}

#[test]
fn su2_structure_constants_are_levi_civita() {
    // Oracle: commutators of -i sigma/2 computed directly from Pauli matrices.
    let t: Vec<C> = (0..3).map(|k| pauli(k) * c(0.0, -0.5)).collect();
    let sc = structure_constants::<f64>(GroupKind::SU2);
    for a in 0..3 {
        for b in 0..3 {
            let comm = &t[a] * &t[b] - &t[b] * &t[a];
            for g in 0..3 {
                let coeff = -2.0 * (&t[g] * &comm).trace().re;
                assert!((sc.get(g, a, b) - coeff).abs() < 1e-15);
                let eps = match (a, b, g) {
                    (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                    (1, 0, 2) | (2, 1, 0) | (0, 2, 1) => -1.0,
                    _ => 0.0,
                };
                assert!((sc.get(g, a, b) - eps).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn su3_structure_constants_from_gell_mann_commutators() {
    // lambda_4 and lambda_5 commute into lambda_3 and lambda_8: [l4, l5] = i (l3 + sqrt3 l8).
    let sc = structure_constants::<f64>(GroupKind::SU3);
    assert!((sc.get(2, 0, 1) - 1.0).abs() < 1e-15);
    assert!((sc.get(2, 3, 4) - 0.5).abs() < 1e-15);
    assert!((sc.get(7, 3, 4) - 3f64.sqrt() / 2.0).abs() < 1e-15);
    assert_eq!(sc.get(6, 3, 4), 0.0);
    assert!((sc.get(6, 0, 3) - 0.5).abs() < 1e-15);
    assert!((sc.get(5, 0, 4) + 0.5).abs() < 1e-15);
    // bracket reproduces structure constants as matrices
    let ts = generators::<f64>(GroupKind::SU3);
    for a in 0..8 {
        for b in 0..8 {
            let comm = &ts[a] * &ts[b] - &ts[b] * &ts[a];
            let rebuilt = (0..8).fold(C::zeros(3, 3), |acc, g| acc + &ts[g] * c(sc.get(g, a, b), 0.0));
            assert!(max_abs(&(comm - rebuilt)) < 1e-12);
            assert_eq!(sc.get(0, a, b), -sc.get(0, b, a));
        }
    }
}

#[test]
fn jacobi_identity_all_groups() {
    for kind in [GroupKind::U1, GroupKind::SU2, GroupKind::SU3] {
        let sc = structure_constants::<f64>(kind);
        let n = kind.dim_algebra();
        for a in 0..n {
            for b in 0..n {
                for g in 0..n {
                    for s in 0..n {
                        let v: f64 = (0..n)
                            .map(|m| {
                                sc.get(m, a, b) * sc.get(s, m, g)
                                    + sc.get(m, b, g) * sc.get(s, m, a)
                                    + sc.get(m, g, a) * sc.get(s, m, b)
                            })
                            .sum();
                        assert!(v.abs() < 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn su2_adjoint_generator_entries() {
    let t3 = adjoint_generator::<f64>(GroupKind::SU2, 2).unwrap();
    let want = C::from_row_slice(3, 3, &[c(0., 0.), c(0., -1.), c(0., 0.), c(0., 1.), c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
    assert!(max_abs(&(t3 - want)) < 1e-15);
}

#[test]
fn adjoint_generators_close_under_bracket() {
    for kind in [GroupKind::SU2, GroupKind::SU3] {
        let sc = structure_constants::<f64>(kind);
        let n = kind.dim_algebra();
        let ad: Vec<C> = (0..n).map(|g| adjoint_generator::<f64>(kind, g).unwrap()).collect();
        // anti-Hermitian images X = -i T obey the defining bracket
        let x: Vec<C> = ad.iter().map(|t| t * c(0.0, -1.0)).collect();
        for a in 0..n {
            for b in 0..n {
                let comm = &x[a] * &x[b] - &x[b] * &x[a];
                let rebuilt = (0..n).fold(C::zeros(n, n), |acc, g| acc + &x[g] * c(sc.get(g, a, b), 0.0));
                assert!(max_abs(&(comm - rebuilt)) < 1e-12);
                let comm_t = &ad[a] * &ad[b] - &ad[b] * &ad[a];
                let rebuilt_t = (0..n).fold(C::zeros(n, n), |acc, g| acc + &ad[g] * c(0.0, sc.get(g, a, b)));
                assert!(max_abs(&(comm_t - rebuilt_t)) < 1e-12);
            }
        }
    }
}

#[test]
fn exp_zero_is_identity() {
    for kind in [GroupKind::U1, GroupKind::SU2, GroupKind::SU3] {
        let g = exp_map(&AlgebraElement::<f64>::zero(kind), 1.0).unwrap();
        assert_eq!(g.matrix, C::identity(kind.matrix_dim(), kind.matrix_dim()));
    }
}

#[test]
fn su2_pi_rotation_about_first_axis() {
    let x = AlgebraElement::new(GroupKind::SU2, vec![std::f64::consts::PI, 0.0, 0.0]).unwrap();
    let g = exp_map(&x, 1.0).unwrap();
    let oracle = expm_oracle(&x.to_matrix());
    let want = C::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., -1.), c(0., 0.)]);
    assert!(max_abs(&(&g.matrix - &oracle)) < 1e-12);
    assert!(max_abs(&(&g.matrix - want)) < 1e-12);
}

#[test]
fn exp_matches_taylor_oracle_and_inverts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for kind in [GroupKind::U1, GroupKind::SU2, GroupKind::SU3] {
        for _ in 0..20 {
            let coeffs: Vec<f64> = (0..kind.dim_algebra()).map(|_| rand::Rng::random_range(&mut rng, -3.0..3.0)).collect();
            let x = AlgebraElement::new(kind, coeffs).unwrap();
            let g = exp_map(&x, 0.7).unwrap();
            let oracle = expm_oracle(&(x.to_matrix() * c(0.7, 0.0)));
            assert!(max_abs(&(&g.matrix - oracle)) < 1e-12);
            assert!(g.unitarity_defect() < 1e-12);
            assert!(g.det_defect() < 1e-12);
            let back = exp_map(&x, -0.7).unwrap();
            assert!(max_abs(&(g.mul(&back).matrix - C::identity(kind.matrix_dim(), kind.matrix_dim()))) < 1e-12);
        }
    }
}

#[test]
fn single_precision_instantiation() {
    let x = AlgebraElement::<f32>::new(GroupKind::SU3, vec![0.3, -0.2, 0.1, 0.5, -0.4, 0.2, 0.9, -1.1]).unwrap();
    let g: qgv_core::GroupElement32 = exp_map(&x, 1.0).unwrap();
    assert!(g.unitarity_defect() < <f32 as qgv_core::Real>::MATRIX_TOL);
    let sc = structure_constants::<f32>(GroupKind::SU2);
    assert!((sc.get(2, 0, 1) - 1.0).abs() < 1e-6);
}

#[test]
fn haar_u1_and_su2_means() {
    let n = 20_000;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut phase = Complex64::new(0.0, 0.0);
    let mut tr = 0.0;
    for _ in 0..n {
        let u: GroupElement<f64> = haar_sample(GroupKind::U1, &mut rng);
        phase += u.matrix[(0, 0)];
        let s: GroupElement<f64> = haar_sample(GroupKind::SU2, &mut rng);
        tr += s.matrix.trace().re;
    }
    let bound = 4.0 / (n as f64).sqrt();
    assert!((phase / n as f64).norm() < bound);
    assert!((tr / n as f64).abs() < 4.0 * 1.0 / (n as f64).sqrt());
}

#[test]
fn haar_left_invariance_su3() {
    // Compare statistics of Re tr(gU) and Re tr(U): both have mean 0, variance 1/2.
    let n = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g: GroupElement<f64> = haar_sample(GroupKind::SU3, &mut ChaCha8Rng::seed_from_u64(77));
    let (mut s1, mut s2, mut q1, mut q2) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..n {
        let u: GroupElement<f64> = haar_sample(GroupKind::SU3, &mut rng);
        assert!(u.unitarity_defect() < 1e-12 && u.det_defect() < 1e-12);
        let a = u.matrix.trace().re;
        let b = g.mul(&u).matrix.trace().re;
        s1 += a;
        s2 += b;
        q1 += a * a;
        q2 += b * b;
    }
    let nf = n as f64;
    let sigma = (0.5f64 / nf).sqrt();
    assert!((s1 / nf - s2 / nf).abs() < 5.0 * sigma * 2f64.sqrt());
    assert!((q1 / nf - 0.5).abs() < 0.02 && (q2 / nf - 0.5).abs() < 0.02);
}

#[test]
fn spinor_identity_and_defining_rep() {
    let id = SpacetimeRep::<f64>::identity(Metric::Minkowski);
    let set = SpinorIndexSet { undotted: 2, dotted: 1 };
    let m = spinor_rep_matrix(set, &id, Metric::Minkowski).unwrap();
    assert_eq!(m, C::identity(8, 8));
    let lam: f64 = 0.8;
    let a = C::from_row_slice(2, 2, &[c((lam / 2.0).exp(), 0.0), c(0., 0.), c(0., 0.), c((-lam / 2.0).exp(), 0.0)]);
    let rep = SpacetimeRep::Lorentz { translation: [0.0; 4], a: a.clone() };
    let m = spinor_rep_matrix(SpinorIndexSet { undotted: 1, dotted: 0 }, &rep, Metric::Minkowski).unwrap();
    assert_eq!(m, a);
}

#[test]
fn spinor_and_vector_reps_are_homomorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let set = SpinorIndexSet { undotted: 1, dotted: 2 };
    for _ in 0..100 {
        let a = random_lorentz(&mut rng, 0.0);
        let b = random_lorentz(&mut rng, 0.0);
        let ab = a.compose(&b).unwrap();
        let lhs = spinor_rep_matrix(set, &ab, Metric::Minkowski).unwrap();
        let rhs = spinor_rep_matrix(set, &a, Metric::Minkowski).unwrap() * spinor_rep_matrix(set, &b, Metric::Minkowski).unwrap();
        let scale = max_abs(&lhs).max(1.0);
        assert!(max_abs(&(lhs - rhs)) < 1e-12 * scale);
        let v = vector_rep_matrix(&ab) - vector_rep_matrix(&a) * vector_rep_matrix(&b);
        let vs = vector_rep_matrix(&ab).abs().max().max(1.0);
        assert!(v.abs().max() < 1e-12 * vs);

        let e = random_euclidean::<f64, _>(&mut rng, 0.0);
        let f = random_euclidean::<f64, _>(&mut rng, 0.0);
        let ef = e.compose(&f).unwrap();
        let lhs = spinor_rep_matrix(set, &ef, Metric::Euclidean).unwrap();
        let rhs = spinor_rep_matrix(set, &e, Metric::Euclidean).unwrap() * spinor_rep_matrix(set, &f, Metric::Euclidean).unwrap();
        assert!(max_abs(&(lhs - rhs)) < 1e-12);
        let v = vector_rep_matrix(&ef) - vector_rep_matrix(&e) * vector_rep_matrix(&f);
        assert!(v.abs().max() < 1e-12);
    }
}

#[test]
fn vector_rep_preserves_metric_and_ignores_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let a = random_lorentz(&mut rng, 0.0);
        let lam = vector_rep_matrix(&a);
        let scale = lam.abs().max().powi(2).max(1.0);
        assert!(metric_defect(&a) < 1e-12 * scale);
        let SpacetimeRep::Lorentz { a: m, .. } = &a else { unreachable!() };
        let neg = SpacetimeRep::Lorentz { translation: [0.0; 4], a: -m.clone() };
        assert!((vector_rep_matrix(&neg) - lam).abs().max() < 1e-12 * scale);

        let e = random_euclidean::<f64, _>(&mut rng, 0.0);
        assert!(metric_defect(&e) < 1e-12);
        assert!((vector_rep_matrix(&e).determinant() - 1.0).abs() < 1e-12);
    }
    let minus = SpacetimeRep::Lorentz { translation: [0.0; 4], a: -C::identity(2, 2) };
    assert!((vector_rep_matrix(&minus) - nalgebra::Matrix4::identity()).abs().max() < 1e-15);
}

proptest! {
    #[test]
    fn bracket_from_constants_matches_matrix_commutator(
        xs in proptest::collection::vec(-2.0f64..2.0, 8),
        ys in proptest::collection::vec(-2.0f64..2.0, 8),
    ) {
        let x = AlgebraElement::new(GroupKind::SU3, xs).unwrap();
        let y = AlgebraElement::new(GroupKind::SU3, ys).unwrap();
        let lhs = x.bracket(&y).to_matrix();
        let (mx, my) = (x.to_matrix(), y.to_matrix());
        let rhs = &mx * &my - &my * &mx;
        prop_assert!(max_abs(&(lhs - rhs)) < 1e-12);
    }

    #[test]
    fn adjoint_action_is_orthogonal(seed in 0u64..1000) {
        let g: GroupElement<f64> = haar_sample(GroupKind::SU3, &mut ChaCha8Rng::seed_from_u64(seed));
        let d = g.adjoint_matrix();
        let defect = (d.transpose() * &d - DMatrix::<f64>::identity(8, 8)).abs().max();
        prop_assert!(defect < 1e-12);
    }
}

