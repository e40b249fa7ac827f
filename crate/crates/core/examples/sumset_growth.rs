// Dimension growth of k-fold sumsets of a Moran set of dimension 1/2.

use dimlab::estimate::{growth_experiment, GrowthOptions};
use dimlab::generators::{moran_tree, Lengths, MoranSpec};

pub fn run_example() -> dimlab::Result<()> {
    let depth = 14;
    let f = moran_tree(&MoranSpec::new(2, Lengths::parse("4^-j")?)?, depth)?;
    let table = growth_experiment(&f, 4, depth, &GrowthOptions::for_depth(depth))?;

    println!(" k  span  box-upper  box-slope  assouad  lower");
    for r in &table.rows {
        println!(
            "{:2}  {:4}  {:9.4}  {:9.4}  {:7.4}  {:5.3}",
            r.k, r.span, r.box_estimate.upper.value, r.box_estimate.value(), r.assouad.value, r.lower.value
        );
    }
    println!("upper increasing until saturated: {}", table.upper_increasing);
    println!("saturated at k = {:?}", table.saturated_at);
    Ok(())
}

fn main() -> dimlab::Result<()> {
    run_example()
}
