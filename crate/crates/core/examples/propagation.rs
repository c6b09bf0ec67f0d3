//! Propagation of operators over a finite metric space: the support bound and
//! the spectral bracket agree on classical representations.

use nccoarse::coarse::{prop_interval, support_prop, PropContext, RepresentationOverMetric};
use nccoarse::metric::MetricSpace;
use nccoarse::rng::CounterRng;
use nccoarse::{Operator, Tolerances};

fn main() -> nccoarse::Result<()> {
    let tol = Tolerances::default();
    let rep = RepresentationOverMetric::new(MetricSpace::on_line(&[0.0, 1.0, 3.0, 7.0]), vec![1, 2, 1, 1])?;
    let ctx = PropContext::classical(rep.clone()).with_samples(16, 3);

    let mut rng = CounterRng::new(11);
    let n = rep.dim();
    let shift = Operator::from_fn(n, n, |i, j| if j == i + 1 { 1.0.into() } else { 0.0.into() });
    let random = rng.gaussian_operator(n, n);
    for (name, t) in [("identity", Operator::identity(n)), ("shift", shift), ("dense", random)] {
        let r = prop_interval(&t, &ctx, &tol)?;
        println!(
            "{name:>8}: support {} | bracket [{}, {}] | witness {}",
            support_prop(&t, &rep, &tol)?,
            r.interval.lower,
            r.interval.upper,
            r.interval.lower_witness
        );
    }
    Ok(())
}
