//! A coarse union of qubits and a three-point space: distances across
//! components, the approximate unit and covering estimates.

use nccoarse::algebra::{mk_union, Seminorm, State};
use nccoarse::constructions::{approx_unit, covering_curve, UnionComponent, UnionSpace};
use nccoarse::metric::MetricSpace;
use nccoarse::Tolerances;

fn main() -> nccoarse::Result<()> {
    let tol = Tolerances::default();
    let qubit = || UnionComponent::new(Seminorm::Spread { dim: 2 }, State::pure(2, 0), &tol);
    let line = UnionComponent::new(
        Seminorm::ClassicalLip(MetricSpace::on_line(&[0.0, 1.0, 3.0])),
        State::point_mass(3, 0),
        &tol,
    )?;
    let u = UnionSpace::new(vec![qubit()?, line, qubit()?], vec![1.5, 2.5])?;

    let a = State::pure(2, 1);
    let b = State::pure(2, 0).with_block(2);
    println!("d(|1> in block 0, |0> in block 2) = {}", mk_union(&a, &b, &u, &tol)?);
    let c = State::point_mass(3, 2).with_block(1);
    println!("d(|1> in block 0, point 3 of the line) = {}", mk_union(&a, &c, &u, &tol)?);

    for n in 0..3 {
        println!("approximate unit e_{n}: seminorm {}", approx_unit(&u, n, &tol)?.1);
    }
    for p in covering_curve(&u, 3, &[0.25, 0.5, 1.0, 2.0], 9, 300, &tol)? {
        println!("eps {:>5}: net size {}", p.eps, p.estimate);
    }
    Ok(())
}
