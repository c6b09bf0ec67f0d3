use nccoarse::algebra::{random_lipschitz, Seminorm};
use nccoarse::coarse::{
    commutant_seminorm_interval, prop_interval, spectral_witness, support_prop, witness_radius, PropContext,
    RepresentationOverMetric,
};
use nccoarse::linalg::op_norm;
use nccoarse::rng::CounterRng;
use nccoarse::verify::oracles::{random_integer_metric, random_sparse};
use nccoarse::Tolerances;
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn instance(seed: u64, n: usize) -> (RepresentationOverMetric, nccoarse::Operator, CounterRng) {
    let mut rng = CounterRng::new(seed);
    let m = random_integer_metric(&mut rng, n);
    let mult: Vec<usize> = (0..n).map(|_| 1 + rng.below(2)).collect();
    let rep = RepresentationOverMetric::new(m, mult).unwrap();
    let p = rng.range(0.05, 0.4);
    let t = random_sparse(&mut rng, rep.dim(), p);
    (rep, t, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witness_vanishes_beyond_support(seed in any::<u64>(), n in 2usize..9, extra in 0.0f64..3.0) {
        let (rep, t, mut rng) = instance(seed, n);
        let p = support_prop(&t, &rep, &tol()).unwrap();
        let f = random_lipschitz(&rep.metric, &mut rng);
        let c = rng.range(-2.0, 2.0);
        let a = rep.multiplication(&f.iter().map(|v| v - c).collect::<Vec<_>>());
        let w = spectral_witness(&t, &a, p + extra, &tol()).unwrap();
        prop_assert!(w <= 1e-10 * (1.0 + op_norm(&t)), "witness {} beyond prop {}", w, p);
        prop_assert!(witness_radius(&t, &a, &tol()).unwrap() <= p + 1e-9);
    }

    #[test]
    fn propagation_bracket_is_ordered(seed in any::<u64>(), n in 2usize..9) {
        let (rep, t, _) = instance(seed, n);
        let ctx = PropContext::classical(rep.clone()).with_samples(4, seed);
        let r = prop_interval(&t, &ctx, &tol()).unwrap();
        prop_assert!(r.interval.lower <= r.interval.upper + 1e-12);
        prop_assert!((r.interval.lower - support_prop(&t, &rep, &tol()).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn commutant_seminorm_below_three_prop_norm(seed in any::<u64>(), n in 2usize..7) {
        let (rep, t, mut rng) = instance(seed, n);
        let ctx = PropContext::classical(rep.clone()).with_samples(0, seed);
        let iv = commutant_seminorm_interval(&t, &ctx, 2, &tol()).unwrap();
        let bound = 3.0 * support_prop(&t, &rep, &tol()).unwrap() * op_norm(&t);
        prop_assert!(iv.lower <= bound + 1e-9);
        prop_assert!(iv.lower <= iv.upper + 1e-12);
        // Sampled 1-Lipschitz functions against the coarser 8 prop ‖T‖ estimate.
        for _ in 0..4 {
            let f = random_lipschitz(&rep.metric, &mut rng);
            let l = nccoarse::metric::lipschitz_const(&f, &rep.metric);
            if l == 0.0 {
                continue;
            }
            let a = rep.multiplication(&f.iter().map(|v| v / l).collect::<Vec<_>>());
            prop_assert!(op_norm(&t.commutator(&a)) <= 8.0 * bound / 3.0 + 1e-9);
        }
    }

    #[test]
    fn matrix_block_has_no_escape(seed in any::<u64>(), k in 2usize..6) {
        let mut rng = CounterRng::new(seed);
        let l = Seminorm::Spread { dim: k };
        let t = rng.gaussian_operator(k, k);
        for _ in 0..4 {
            let a = l.sample_unit(&mut rng, &tol());
            prop_assert!(spectral_witness(&t, &a, 2.0, &tol()).unwrap() <= 1e-10 * (1.0 + op_norm(&t)));
            prop_assert!(witness_radius(&t, &a, &tol()).unwrap() <= 2.0 + 1e-9);
        }
    }
}
