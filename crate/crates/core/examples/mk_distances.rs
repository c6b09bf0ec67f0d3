//! Monge–Kantorovich distances for the three kinds of seminorm: classical
//! Lipschitz (linear program), spread on a matrix block (closed form) and the
//! commutator with a Dirac operator (certified lower bound).

use nccoarse::algebra::{mk_classical, mk_commutator, mk_spread, State};
use nccoarse::metric::MetricSpace;
use nccoarse::{Operator, Tolerances};

fn main() -> nccoarse::Result<()> {
    let tol = Tolerances::default();

    let m = MetricSpace::on_line(&[0.0, 1.0, 3.0]);
    let mu = State::point_mass(3, 0);
    let nu = State::uniform(3);
    let r = mk_classical(&mu, &nu, &m, &tol)?;
    println!("classical: {:.6} (primal {:.6}, dual {:.6})", r.value, r.primal, r.dual);
    println!("  dual witness {:?}", r.witness);

    let up = State::pure(2, 0);
    let down = State::pure(2, 1);
    let s = mk_spread(&up, &down, &tol)?;
    println!("spread, orthogonal qubit states: {}", s.value);

    let d = Operator::pauli_x();
    let iv = mk_commutator(&State::pure(2, 0), &State::uniform(2), &d, 8, 7, None, &tol)?;
    println!("commutator with X: [{:.6}, {}] via {}", iv.lower, iv.upper, iv.lower_witness);
    Ok(())
}
