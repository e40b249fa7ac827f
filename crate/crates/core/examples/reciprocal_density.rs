// Sumsets of {1/k} ∪ {0} fill ever longer initial intervals densely.

use dimlab::arithmetic::{delta_dense_check, iterated_sumset};
use dimlab::generators::reciprocal_tree;

pub fn run_example() -> dimlab::Result<()> {
    let depth = 12;
    let f = reciprocal_tree(depth)?;
    for n in 1..=3u32 {
        let nf = iterated_sumset(&f, n, depth)?;
        let upper = (-(depth as f64) / (1u64 << n) as f64).exp2();
        let dense = delta_dense_check(&nf, depth, upper)?;
        let count = nf.level(depth).len();
        println!(
            "n={n}: dense on [0, {upper:.4}] = {dense}, N = {count}, log2 N / {depth} = {:.3}",
            (count as f64).log2() / depth as f64
        );
    }
    Ok(())
}

fn main() -> dimlab::Result<()> {
    run_example()
}
