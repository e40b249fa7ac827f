// k-fold sums of a two-map IFS attractor become an interval at k = ⌈(1−r)/r⌉.

use dimlab::generators::{ifs_attractor, iterated_ifs, IfsSpec};
use dimlab::rational::{format_rational, Q};

pub fn run_example() -> dimlab::Result<()> {
    let depth = 12;
    for r in [Q::new(1, 3), Q::new(1, 4), Q::new(1, 5)] {
        let phi = IfsSpec::two_map(r)?;
        let k_star = ((Q::from_integer(1) - r) / r).ceil().to_integer() as u32;
        for k in 1..=k_star {
            let t = ifs_attractor(&iterated_ifs(&phi, k)?, depth)?;
            let cells = t.universe(depth);
            let occupied = t.level(depth).len();
            println!(
                "r={} k={k}: {occupied}/{cells} cells{}",
                format_rational(r),
                if occupied == cells { "  (interval)" } else { "" }
            );
        }
    }
    Ok(())
}

fn main() -> dimlab::Result<()> {
    run_example()
}
