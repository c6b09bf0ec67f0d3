//! `C(X) ⊗ M_k`: the propagation sandwich through matrix blocks and the
//! corona maps to `C(X)`.

use nccoarse::algebra::State;
use nccoarse::constructions::{ac_prop_sandwich, corona_maps_check, ACSpace};
use nccoarse::metric::MetricSpace;
use nccoarse::rng::CounterRng;
use nccoarse::verify::oracles::random_sparse;
use nccoarse::Tolerances;

fn main() -> nccoarse::Result<()> {
    let tol = Tolerances::default();
    let space = ACSpace::new(MetricSpace::integer_interval(0, 5), 2)?;
    let mut rng = CounterRng::new(4);
    for trial in 0..3 {
        let t = random_sparse(&mut rng, space.element_dim(), 0.1);
        let s = ac_prop_sandwich(&t, &space, 16, trial, &tol)?;
        println!(
            "trial {trial}: block prop {} | witness lower {} | upper limit {} | ok {}",
            s.block_prop,
            s.witness_lower,
            s.upper_limit,
            s.ok()
        );
    }
    let c = corona_maps_check(&space, &State::uniform(2), 16, 1, &tol)?;
    println!(
        "corona maps: unital {} | cp {} | left inverse defect {:.2e} | tails match {}",
        c.unital, c.completely_positive, c.left_inverse_defect, c.tail_matches
    );
    Ok(())
}
