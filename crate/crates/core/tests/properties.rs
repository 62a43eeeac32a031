use charmat_core::boundary::{laplacian, BoundaryCondition, GridDiscretization};
use charmat_core::calculus::{resolvent, spectral_projection, unitary_group};
use charmat_core::family::{
    char_matrix_fiberwise, direct_integral, lennon_product, lennon_sum, FamilyVector,
    OperatorFamily, ParameterGrid,
};
use charmat_core::graph::{
    adjoint_char_matrix, char_matrix, char_matrix_oracle, inverse_char_matrix,
    operator_from_char_matrix, verify_identities,
};
use charmat_core::hilbert::{inner_product, polarization, quadratic_form, relative_residual};
use charmat_core::{ComplexMatrix, Vector};
use num_complex::Complex64;
use proptest::prelude::*;

fn entries(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), len).prop_map(|v| {
        v.into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect()
    })
}

fn square(max_n: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        entries(n * n).prop_map(move |d| ComplexMatrix::from_row_major(n, n, d).unwrap())
    })
}

fn hermitian(max_n: usize) -> impl Strategy<Value = ComplexMatrix> {
    square(max_n).prop_map(|a| a.hermitian_part())
}

fn vector(n: usize) -> impl Strategy<Value = Vector> {
    entries(n).prop_map(|e| Vector::new(e).unwrap())
}

/// Families on a shared random grid, `m ≤ 4` nodes of size `n ≤ 4`.
fn family_pair() -> impl Strategy<Value = (OperatorFamily, OperatorFamily)> {
    (1..=4usize, 1..=4usize).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(0.01..1.0f64, m),
            prop::collection::vec(entries(n * n), m),
            prop::collection::vec(entries(n * n), m),
        )
            .prop_map(move |(gaps, a, b)| {
                let nodes: Vec<f64> = gaps
                    .iter()
                    .scan(0.0, |t, g| {
                        *t += g;
                        Some(*t)
                    })
                    .collect();
                let grid = ParameterGrid::trapezoidal(nodes).unwrap();
                let build = |data: Vec<Vec<Complex64>>| {
                    let fibers = data
                        .into_iter()
                        .map(|d| ComplexMatrix::from_row_major(n, n, d).unwrap())
                        .collect();
                    OperatorFamily::new(grid.clone(), fibers).unwrap()
                };
                (build(a), build(b))
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_agrees_with_closed_form(t in square(8)) {
        let d = char_matrix(&t).unwrap().distance(&char_matrix_oracle(&t).unwrap());
        prop_assert!(d <= 1e-10, "{d}");
    }

    #[test]
    fn block_identities_hold(t in square(8)) {
        let report = verify_identities(&t, &char_matrix(&t).unwrap()).unwrap();
        prop_assert!(report.all_passed(), "{:?}", report.failures());
    }

    #[test]
    fn adjoint_permutation_is_involution(t in square(6)) {
        let p = char_matrix(&t).unwrap();
        // the off-diagonal blocks return exactly; I − (I − X) only to rounding
        let back = adjoint_char_matrix(&adjoint_char_matrix(&p));
        prop_assert_eq!(&back.p12, &p.p12);
        prop_assert_eq!(&back.p21, &p.p21);
        prop_assert!(back.distance(&p) <= 1e-15);
    }

    #[test]
    fn inverse_permutation_is_involution(t in square(6)) {
        let p = char_matrix(&t).unwrap();
        if let Ok(q) = inverse_char_matrix(&p) {
            prop_assert_eq!(inverse_char_matrix(&q).unwrap(), p);
        }
    }

    #[test]
    fn operator_round_trip(t in square(8)) {
        let back = operator_from_char_matrix(&char_matrix(&t).unwrap()).unwrap();
        prop_assert!(relative_residual(&back, &t) <= 1e-9);
    }

    #[test]
    fn mixed_block_adjoint(t in square(6)) {
        let n = t.rows();
        let id = ComplexMatrix::identity(n);
        let t_star = t.adjoint();
        let left = (&t * &(&(&t_star * &t) + &id).inverse().unwrap()).adjoint();
        let right = &t_star * &(&(&t * &t_star) + &id).inverse().unwrap();
        prop_assert!(relative_residual(&left, &right) <= 1e-10);
    }

    #[test]
    fn polarization_recovers_form(a in square(5), seed in any::<u64>()) {
        let n = a.rows();
        let mut rng = charmat_core::random::rng(seed);
        let k1 = charmat_core::random::vector(&mut rng, n);
        let k2 = charmat_core::random::vector(&mut rng, n);
        let direct = inner_product(&k1, &a.apply(&k2).unwrap()).unwrap();
        let via_q = polarization(quadratic_form(&a), &k1, &k2).unwrap();
        prop_assert!((direct - via_q).norm() <= 1e-10 * (1.0 + direct.norm()));
    }

    #[test]
    fn fiberwise_char_matrix_matches_assembly((a, _) in family_pair()) {
        prop_assert!(char_matrix_fiberwise(&a).unwrap().residual <= 1e-10);
    }

    #[test]
    fn assembly_adjoint_is_exact((a, _) in family_pair()) {
        prop_assert_eq!(direct_integral(&a).assembled.adjoint(), direct_integral(&a.adjoint()).assembled);
    }

    #[test]
    fn lennon_laws((a, b) in family_pair()) {
        let whole = |f: &OperatorFamily| direct_integral(f).assembled;
        prop_assert_eq!(whole(&lennon_sum(&a, &b).unwrap()), &whole(&a) + &whole(&b));
        let prod = whole(&lennon_product(&a, &b).unwrap());
        prop_assert!(relative_residual(&prod, &(&whole(&a) * &whole(&b))) <= 1e-12);
    }

    #[test]
    fn weighted_inner_product((a, b) in family_pair()) {
        // reuse the fibers' first columns as sections
        let sections = |f: &OperatorFamily| f.fibers().iter().map(|m| m.column(0)).collect();
        let f = FamilyVector::new(a.grid().clone(), sections(&a)).unwrap();
        let g = FamilyVector::new(b.grid().clone(), sections(&b)).unwrap();
        let fg = f.inner(&g).unwrap();
        let gf = g.inner(&f).unwrap();
        prop_assert!((fg - gf.conj()).norm() <= 1e-12 * (1.0 + fg.norm()));
        let ff = f.inner(&f).unwrap();
        prop_assert!(ff.im.abs() <= 1e-12 * ff.re.abs().max(1.0));
        prop_assert!(ff.re >= 0.0);
        if f.norm() > 0.0 {
            prop_assert!(ff.re > 0.0);
        }
    }

    #[test]
    fn spectral_projection_is_monotone(t in hermitian(6), l1 in -8.0..8.0f64, l2 in -8.0..8.0f64) {
        let (lo, hi) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
        let e_lo = spectral_projection(&t, lo).unwrap();
        let e_hi = spectral_projection(&t, hi).unwrap();
        prop_assert!((&(&e_lo * &e_hi) - &e_lo).frobenius_norm() <= 1e-10);
    }

    #[test]
    fn first_resolvent_identity(t in hermitian(6), x1 in -3.0..3.0f64, y1 in 0.1..3.0f64, x2 in -3.0..3.0f64, y2 in -3.0..-0.1f64) {
        let (z1, z2) = (Complex64::new(x1, y1), Complex64::new(x2, y2));
        let r1 = resolvent(&t, z1).unwrap();
        let r2 = resolvent(&t, z2).unwrap();
        let lhs = &r1 - &r2;
        let rhs = (&r1 * &r2).scale(z1 - z2);
        prop_assert!(relative_residual(&lhs, &rhs) <= 1e-9);
    }

    #[test]
    fn unitary_group_law(t in hermitian(6), s1 in -2.0..2.0f64, s2 in -2.0..2.0f64) {
        let n = t.rows();
        let u = unitary_group(&t, s1).unwrap();
        prop_assert!((&(&u.adjoint() * &u) - &ComplexMatrix::identity(n)).frobenius_norm() <= 1e-9);
        let product = &u * &unitary_group(&t, s2).unwrap();
        prop_assert!(relative_residual(&product, &unitary_group(&t, s1 + s2).unwrap()) <= 1e-9);
    }

    #[test]
    fn vector_pairing(f in vector(4), g in vector(4)) {
        let fg = inner_product(&f, &g).unwrap();
        prop_assert!((fg - inner_product(&g, &f).unwrap().conj()).norm() <= 1e-12 * (1.0 + fg.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn dirichlet_lower_bound(n in 10usize..120) {
        let g = GridDiscretization::interior(n).unwrap();
        let vals = charmat_core::hilbert::eigvals_hermitian(&laplacian(&g, BoundaryCondition::Dirichlet).unwrap()).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        prop_assert!(vals[0] >= pi2 * (1.0 - 3.0 / n as f64));
    }

    #[test]
    fn periodic_kernel_is_one_dimensional(n in 10usize..120) {
        let g = GridDiscretization::periodic(n).unwrap();
        let vals = charmat_core::hilbert::eigvals_hermitian(&laplacian(&g, BoundaryCondition::Periodic).unwrap()).unwrap();
        prop_assert!(vals[0].abs() <= 1e-8);
        prop_assert!(vals[1] > 1.0);
    }
}
