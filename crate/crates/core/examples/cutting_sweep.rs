//! Cutting a banded operator on a line down to finite propagation with grid
//! covers, for a range of radii.

use nccoarse::coarse::{commutant_seminorm_upper, PropContext, RepresentationOverMetric};
use nccoarse::cutting::cut_sweep;
use nccoarse::metric::{GridBox, GridNorm};
use nccoarse::rng::CounterRng;
use nccoarse::verify::oracles::random_banded;
use nccoarse::Tolerances;

fn main() -> nccoarse::Result<()> {
    let tol = Tolerances::default();
    let grid = GridBox::new(vec![0], vec![63], GridNorm::L1)?;
    let rep = RepresentationOverMetric::simple(grid.metric_space());
    let t = random_banded(&mut CounterRng::new(1), 64, 3);
    let (lstar_ub, how) = commutant_seminorm_upper(&t, &PropContext::classical(rep.clone()), &tol)?;
    println!("L* <= {lstar_ub:.4} from {how}");
    println!("{:>6} {:>12} {:>12} {:>8}", "R", "deviation", "bound", "ratio");
    for row in cut_sweep(&t, &grid, &rep, &[1.0, 2.0, 4.0, 8.0, 16.0], lstar_ub, &tol)? {
        println!("{:>6} {:>12.6} {:>12.4} {:>8.5}", row.r, row.deviation, row.bound, row.ratio);
    }
    Ok(())
}
