//! Slow oscillation of `sin(log(1 + x))` versus `sin(x)` on growing
//! truncations of the half-line.

use nccoarse::constructions::decay_curve;

fn main() -> nccoarse::Result<()> {
    let truncations = [(10, 100), (100, 1_000), (1_000, 10_000), (10_000, 100_000)];
    let slow = decay_curve(|x| (1.0 + x).ln().sin(), 10.0, &truncations)?;
    let fast = decay_curve(f64::sin, 10.0, &truncations)?;
    println!("{:>7} {:>14} {:>10}", "K", "sin(log(1+x))", "sin(x)");
    for (s, f) in slow.iter().zip(&fast) {
        println!("{:>7} {:>14.6e} {:>10.6}", s.k, s.score, f.score);
    }
    Ok(())
}
