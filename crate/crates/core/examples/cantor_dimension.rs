// Box, Assouad and lower dimension estimates of the middle-thirds Cantor set.

use dimlab::estimate::{assouad_estimate, box_estimate, lower_estimate};
use dimlab::generators::{ifs_attractor, IfsSpec};
use dimlab::rational::parse_rational;

pub fn run_example() -> dimlab::Result<()> {
    let spec = IfsSpec::two_map(parse_rational("1/3")?)?;
    let cantor = ifs_attractor(&spec, 20)?;

    let b = box_estimate(&cantor, 12, 20)?;
    println!("log 2 / log 3     = {:.4}", 2f64.ln() / 3f64.ln());
    println!("box (slope)       = {:.4}", b.value());
    println!("box (upper/lower) = {:.4} / {:.4}", b.upper.value, b.lower.value);
    println!("assouad (m=10)    = {:.4}", assouad_estimate(&cantor, 10)?.value);
    println!("lower   (m=10)    = {:.4}", lower_estimate(&cantor, 10)?.value);
    for p in &b.slope.per_scale {
        println!("  n={:2}  log2 N = {:.3}", p.n, p.log2_count);
    }
    Ok(())
}

fn main() -> dimlab::Result<()> {
    run_example()
}
