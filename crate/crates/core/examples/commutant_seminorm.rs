//! Brackets for `sup ‖[T, a]‖` over the Lipschitz unit ball, classical and
//! on a matrix block with a supplied diameter bound.

use nccoarse::algebra::Seminorm;
use nccoarse::coarse::{commutant_seminorm_interval, PropContext, RepresentationOverMetric};
use nccoarse::metric::MetricSpace;
use nccoarse::{Operator, Tolerances};

fn main() -> nccoarse::Result<()> {
    let tol = Tolerances::default();
    let m = MetricSpace::on_line(&[0.0, 1.0, 3.0]);
    let ctx = PropContext::classical(RepresentationOverMetric::simple(m));
    for (x, y) in [(0, 1), (1, 2), (0, 2)] {
        let t = Operator::matrix_unit(3, x, y);
        let iv = commutant_seminorm_interval(&t, &ctx, 4, &tol)?;
        println!("|e{x}><e{y}|: [{:.6}, {:.6}]  ({})", iv.lower, iv.upper, iv.lower_witness);
    }

    let ctx = PropContext::noncommutative(Seminorm::Spread { dim: 2 }, 0, 5).with_diameter_bound(2.0);
    let iv = commutant_seminorm_interval(&Operator::pauli_x(), &ctx, 8, &tol)?;
    println!("X on M_2 with spread: [{:.6}, {:.6}]", iv.lower, iv.upper);
    Ok(())
}
