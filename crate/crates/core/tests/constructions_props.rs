use nccoarse::algebra::{Seminorm, State};
use nccoarse::constructions::{
    ac_assemble, ac_block, ac_seminorm, union_seminorm, ACSpace, UnionComponent, UnionSpace,
};
use nccoarse::linalg::op_norm;
use nccoarse::metric::MetricSpace;
use nccoarse::rng::CounterRng;
use nccoarse::verify::oracles::random_integer_metric;
use nccoarse::{Operator, Tolerances};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn union_of(rng: &mut CounterRng, parts: usize) -> UnionSpace {
    let mut comps = Vec::new();
    for _ in 0..parts {
        if rng.bernoulli(0.5) {
            let k = 1 + rng.below(3);
            let anchor = State::Density { block: 0, density: rng.density_matrix(k) };
            comps.push(UnionComponent::new(Seminorm::Spread { dim: k }, anchor, &tol()).unwrap());
        } else {
            let n = 2 + rng.below(3);
            let m = random_integer_metric(rng, n);
            let anchor = State::Probs { block: 0, probs: rng.probability_vector(n) };
            comps.push(UnionComponent::new(Seminorm::ClassicalLip(m), anchor, &tol()).unwrap());
        }
    }
    let gaps = (0..parts).map(|_| rng.range(0.5, 4.0)).collect();
    UnionSpace::new(comps, gaps).unwrap()
}

fn element(rng: &mut CounterRng, u: &UnionSpace) -> Vec<Operator> {
    u.components
        .iter()
        .map(|c| match &c.seminorm {
            Seminorm::ClassicalLip(m) => Operator::from_diag(&(0..m.len()).map(|_| rng.normal()).collect::<Vec<_>>()),
            _ => rng.gaussian_hermitian(c.dim()),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn union_seminorm_is_a_seminorm(seed in any::<u64>(), parts in 1usize..5, s in -3.0f64..3.0) {
        let mut rng = CounterRng::new(seed);
        let u = union_of(&mut rng, parts);
        let a = element(&mut rng, &u);
        let b = element(&mut rng, &u);
        let sum: Vec<Operator> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let scaled: Vec<Operator> = a.iter().map(|x| x.scale(s)).collect();
        let la = union_seminorm(&a, &u, &tol()).unwrap();
        let lb = union_seminorm(&b, &u, &tol()).unwrap();
        prop_assert!(union_seminorm(&sum, &u, &tol()).unwrap() <= la + lb + 1e-9 * (1.0 + la + lb));
        prop_assert!((union_seminorm(&scaled, &u, &tol()).unwrap() - s.abs() * la).abs() <= 1e-9 * (1.0 + la));
    }

    #[test]
    fn union_seminorm_vanishes_on_the_unit(seed in any::<u64>(), parts in 1usize..5) {
        let mut rng = CounterRng::new(seed);
        let mut u = union_of(&mut rng, parts);
        let ones: Vec<Operator> = u.components.iter().map(|c| Operator::identity(c.dim())).collect();
        u.gaps.pop();
        prop_assert!(union_seminorm(&ones, &u, &tol()).unwrap() <= 1e-12);
    }

    #[test]
    fn ac_seminorm_reduces_to_its_factors(seed in any::<u64>(), n in 2usize..6, k in 1usize..4) {
        let mut rng = CounterRng::new(seed);
        let base = random_integer_metric(&mut rng, n);
        let space = ACSpace::new(base.clone(), k).unwrap();
        // f ⊗ 1 sees only the Lipschitz constant of f.
        let f: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let fibers = space.fibers_of(&space.scalar_function(&f)).unwrap();
        let lip = nccoarse::metric::lipschitz_const(&f, &base);
        prop_assert!((ac_seminorm(&fibers, &space, &tol()).unwrap() - lip).abs() <= 1e-9 * (1.0 + lip));
        // 1 ⊗ b sees only the spread of b.
        let b = rng.gaussian_hermitian(k);
        let constant = vec![b.clone(); n];
        let sp = nccoarse::algebra::spread(&b, &tol()).unwrap();
        prop_assert!((ac_seminorm(&constant, &space, &tol()).unwrap() - sp).abs() <= 1e-9 * (1.0 + sp));
    }

    #[test]
    fn ac_blocks_round_trip(seed in any::<u64>(), n in 1usize..5, k in 1usize..4) {
        let mut rng = CounterRng::new(seed);
        let space = ACSpace::new(MetricSpace::integer_interval(0, n as i64 - 1), k).unwrap();
        let t = rng.gaussian_operator(n * k, n * k);
        let blocks: Vec<Vec<Operator>> =
            (0..k).map(|i| (0..k).map(|j| ac_block(&t, &space, i, j).unwrap()).collect()).collect();
        let back = ac_assemble(&blocks, &space);
        prop_assert_eq!(back.data(), t.data());
        prop_assert!(op_norm(&blocks[0][0]) <= op_norm(&t) * (1.0 + 1e-12));
    }
}
