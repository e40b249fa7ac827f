// The additive semigroup generated by {1, √2}, truncated to [0, 4).

use dimlab::generators::semigroup_tree;

pub fn run_example() -> dimlab::Result<()> {
    let out = semigroup_tree(&[1.0, 2f64.sqrt()], 4, 10)?;
    println!("rounds {}, fixpoint {}, guard bits {}", out.rounds, out.fixpoint, out.guard_bits);
    for n in [2, 4, 6, 8, 10] {
        println!("level {n:2}: {} occupied cells", out.tree.level(n).len());
    }
    Ok(())
}

fn main() -> dimlab::Result<()> {
    run_example()
}
