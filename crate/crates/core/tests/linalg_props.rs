use nccoarse::linalg::{expi, herm_eig, op_norm, spectral_projection, Interval};
use nccoarse::rng::CounterRng;
use nccoarse::{Operator, Tolerances};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), n in 1usize..9) {
        let a = CounterRng::new(seed).gaussian_hermitian(n);
        let e = herm_eig(&a, &tol()).unwrap();
        let back = e.reconstruct_with(|l| l.into());
        prop_assert!(back.max_abs_diff(&a) <= 1e-10 * (1.0 + a.max_abs()));
        let u = &e.eigenvectors;
        let gram = &u.adjoint() * u;
        prop_assert!(gram.max_abs_diff(&Operator::identity(n)) <= 1e-10);
    }

    #[test]
    fn projections_split_the_identity(seed in any::<u64>(), n in 1usize..9, c in -2.0f64..2.0) {
        let a = CounterRng::new(seed).gaussian_hermitian(n);
        let p = spectral_projection(&a, &Interval::at_most(c), &tol()).unwrap();
        let q = spectral_projection(&a, &Interval::above(c), &tol()).unwrap();
        prop_assert!((&p * &p).max_abs_diff(&p) <= 1e-10);
        prop_assert!((&q * &q).max_abs_diff(&q) <= 1e-10);
        prop_assert!((&p + &q).max_abs_diff(&Operator::identity(n)) <= 1e-10);
        prop_assert!((&p * &q).max_abs() <= 1e-10);
    }

    #[test]
    fn operator_norm_is_submultiplicative(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = CounterRng::new(seed);
        let a = rng.gaussian_operator(n, n);
        let b = rng.gaussian_operator(n, n);
        prop_assert!(op_norm(&(&a * &b)) <= op_norm(&a) * op_norm(&b) * (1.0 + 1e-10));
        prop_assert!(op_norm(&(&a + &b)) <= (op_norm(&a) + op_norm(&b)) * (1.0 + 1e-10));
        prop_assert!((op_norm(&a.adjoint()) - op_norm(&a)).abs() <= 1e-9 * (1.0 + op_norm(&a)));
    }

    #[test]
    fn evolution_is_a_unitary_group(seed in any::<u64>(), n in 1usize..8, s in -4.0f64..4.0, t in -4.0f64..4.0) {
        let d = CounterRng::new(seed).gaussian_hermitian(n);
        let us = expi(&d, s, &tol()).unwrap();
        let ut = expi(&d, t, &tol()).unwrap();
        let ust = expi(&d, s + t, &tol()).unwrap();
        prop_assert!((&us * &ut).max_abs_diff(&ust) <= 1e-9);
        prop_assert!((&us.adjoint() * &us).max_abs_diff(&Operator::identity(n)) <= 1e-10);
    }
}
