use nccoarse::algebra::{mk_classical, mk_spread, random_lipschitz, spread, Seminorm, State};
use nccoarse::linalg::op_norm;
use nccoarse::rng::CounterRng;
use nccoarse::verify::oracles::random_integer_metric;
use nccoarse::{Operator, Tolerances};
use num_complex::Complex64;
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn probs(rng: &mut CounterRng, n: usize) -> State {
    State::Probs { block: 0, probs: rng.probability_vector(n) }
}

fn jordan(a: &Operator, b: &Operator) -> Operator {
    (&(a * b) + &(b * a)).scale(0.5)
}

/// Unit vector in `C^k` from the rng, as a pure density matrix.
fn pure_state(rng: &mut CounterRng, k: usize) -> (Vec<Complex64>, State) {
    let mut v: Vec<Complex64> = (0..k).map(|_| rng.complex_normal()).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);
    let rho = Operator::outer(&v, &v);
    (v, State::Density { block: 0, density: rho })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classical_distance_is_a_metric(seed in any::<u64>(), n in 2usize..8) {
        let mut rng = CounterRng::new(seed);
        let m = random_integer_metric(&mut rng, n);
        let (a, b, c) = (probs(&mut rng, n), probs(&mut rng, n), probs(&mut rng, n));
        let ab = mk_classical(&a, &b, &m, &tol()).unwrap().value;
        let ba = mk_classical(&b, &a, &m, &tol()).unwrap().value;
        let bc = mk_classical(&b, &c, &m, &tol()).unwrap().value;
        let ac = mk_classical(&a, &c, &m, &tol()).unwrap().value;
        let aa = mk_classical(&a, &a, &m, &tol()).unwrap().value;
        let scale = 1.0 + m.scale();
        prop_assert!((ab - ba).abs() <= 1e-8 * scale);
        prop_assert!(ac <= ab + bc + 1e-8 * scale);
        prop_assert!(aa.abs() <= 1e-8 * scale);
    }

    #[test]
    fn spread_distance_is_bounded_by_two(seed in any::<u64>(), k in 1usize..6) {
        let mut rng = CounterRng::new(seed);
        let rho = State::Density { block: 0, density: rng.density_matrix(k) };
        let sigma = State::Density { block: 0, density: rng.density_matrix(k) };
        let d = mk_spread(&rho, &sigma, &tol()).unwrap();
        prop_assert!(d.value <= 2.0 + 1e-10);
        prop_assert!(spread(&d.witness, &tol()).unwrap() <= 1.0 + 1e-10);
    }

    #[test]
    fn orthogonal_pure_states_are_at_distance_two(seed in any::<u64>(), k in 2usize..6) {
        let mut rng = CounterRng::new(seed);
        let (v, phi) = pure_state(&mut rng, k);
        // Gram–Schmidt a second vector against v.
        let mut w: Vec<Complex64> = (0..k).map(|_| rng.complex_normal()).collect();
        let ip: Complex64 = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
        w.iter_mut().zip(&v).for_each(|(b, a)| *b -= ip * a);
        let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        w.iter_mut().for_each(|z| *z /= n);
        let psi = State::Density { block: 0, density: Operator::outer(&w, &w) };
        let d = mk_spread(&phi, &psi, &tol()).unwrap().value;
        prop_assert!((d - 2.0).abs() <= 1e-9, "distance {}", d);
    }

    #[test]
    fn seminorms_ignore_scalars(seed in any::<u64>(), n in 2usize..6, c in -5.0f64..5.0) {
        let mut rng = CounterRng::new(seed);
        let m = random_integer_metric(&mut rng, n);
        let d = rng.gaussian_hermitian(n);
        let variants = [Seminorm::ClassicalLip(m.clone()), Seminorm::Spread { dim: n }, Seminorm::CommutatorD(d)];
        for l in &variants {
            let a = if l.is_classical() {
                Operator::from_diag(&random_lipschitz(&m, &mut rng))
            } else {
                rng.gaussian_hermitian(n)
            };
            let base = l.eval(&a, &tol()).unwrap();
            let shifted = l.eval(&a.shift(c), &tol()).unwrap();
            prop_assert!((base - shifted).abs() <= 1e-9 * (1.0 + base), "{}: {} vs {}", l.name(), base, shifted);
            prop_assert!(l.eval(&Operator::identity(n).scale(c), &tol()).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn jordan_leibniz(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = CounterRng::new(seed);
        let d = rng.gaussian_hermitian(n);
        for l in [Seminorm::Spread { dim: n }, Seminorm::CommutatorD(d)] {
            let a = rng.gaussian_hermitian(n).shift(rng.normal());
            let b = rng.gaussian_hermitian(n).shift(rng.normal());
            let lhs = l.eval(&jordan(&a, &b), &tol()).unwrap();
            let rhs = l.eval(&a, &tol()).unwrap() * op_norm(&b) + op_norm(&a) * l.eval(&b, &tol()).unwrap();
            prop_assert!(lhs <= rhs * (1.0 + 1e-9) + 1e-12, "{}: {} > {}", l.name(), lhs, rhs);
        }
    }
}
