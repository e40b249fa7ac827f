// Distance set of the planar product C × C against the dimension bounds.

use dimlab::arithmetic::{distance_set, GridSetD};
use dimlab::estimate::{assouad_estimate, box_estimate};
use dimlab::generators::{ifs_attractor, IfsSpec};
use dimlab::rational::Q;

pub fn run_example() -> dimlab::Result<()> {
    let depth = 9;
    let c = ifs_attractor(&IfsSpec::two_map(Q::new(1, 3))?, depth)?;
    let f = GridSetD::product(&[&c, &c])?;
    let d = distance_set(&f)?;
    println!("|F| = {} cells, D(F) spans [0, {})", f.len(), d.span());

    let (bf, bd) = (box_estimate(&f, 4, depth)?.value(), box_estimate(&d, 4, depth)?.value());
    let (af, ad) = (assouad_estimate(&f, 5)?.value, assouad_estimate(&d, 5)?.value);
    println!("box:     F = {bf:.3}, D(F) = {bd:.3}, F/2 = {:.3}", bf / 2.0);
    println!("assouad: F = {af:.3}, D(F) = {ad:.3}, F/2 = {:.3}", af / 2.0);
    Ok(())
}

fn main() -> dimlab::Result<()> {
    run_example()
}
