//! Grid covers of a lattice box: colours, multiplicity and the normalised
//! bump partition built on top of them.

use nccoarse::metric::{bump_partition, grid_cover, r_multiplicity, GridBox, GridNorm};

fn main() -> nccoarse::Result<()> {
    let bx = GridBox::cube(2, 12, GridNorm::LInf)?;
    let m = bx.metric_space();
    println!("{} points, diameter {}", m.len(), m.scale());
    println!("{:>5} {:>7} {:>7} {:>6} {:>12}", "R", "members", "colours", "mult", "partition lip");
    for r in [1.0, 1.5, 2.0, 3.0] {
        let cover = grid_cover(&bx, r)?;
        cover.validate(&m, r)?;
        let mult = r_multiplicity(&cover, &m, r)?;
        let p = bump_partition(&m, &cover, r)?;
        println!(
            "{r:>5} {:>7} {:>7} {mult:>6} {:>12.4}",
            cover.sets.len(),
            cover.color_count(),
            p.max_normalized_lip()
        );
    }
    Ok(())
}
