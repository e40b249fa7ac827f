// Extracting a uniformly branching Moran subtree, and the splitting measure
// on Moran trees.

use dimlab::estimate::lower_estimate;
use dimlab::generators::{extract_moran_subset, moran_tree, Lengths, MoranSpec};
use dimlab::measure::{LocalClass, TreeMeasure};

pub fn run_example() -> dimlab::Result<()> {
    let depth = 16;
    let f = moran_tree(&MoranSpec::new(2, Lengths::parse("4^-j")?)?, depth)?;
    println!("lower estimate of F (m=8): {:.3}", lower_estimate(&f, 8)?.value);

    let sub = extract_moran_subset(&f, 0.5, 0.0, 4)?;
    println!("extracted subtree depth {}, {} leaves", sub.max_depth(), sub.leaves().len());

    let mu = TreeMeasure::splitting(f)?;
    let mut counts = [0usize; 4];
    for level in 0..=depth - 4 {
        for v in mu.tree().vertices(level) {
            let i = match mu.classify_local(v, 0.25, 4)? {
                LocalClass::Uniform => 0,
                LocalClass::Atomic => 1,
                LocalClass::Neither => 2,
                LocalClass::Both => 3,
            };
            counts[i] += 1;
        }
    }
    println!("local classes (eps=0.25, m=4): uniform {}, atomic {}, neither {}, both {}", counts[0], counts[1], counts[2], counts[3]);
    Ok(())
}

fn main() -> dimlab::Result<()> {
    run_example()
}
