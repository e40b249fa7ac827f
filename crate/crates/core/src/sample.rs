//! Seeded random trees for property tests and verification suites.

use rand::Rng;

use crate::cells::CellSet;
use crate::dyadic::{level_universe, DyadicTree};

/// Per-level probabilities that an occupied cell keeps both children.
///
/// Mixes mostly-branching, mostly-single-child, block-patterned and
/// fully random regimes so that both uniform and atomic scales occur.
pub fn random_level_probs<R: Rng + ?Sized>(rng: &mut R, depth: u32) -> Vec<f64> {
    let regime = rng.gen_range(0..4);
    let block = rng.gen_range(1..=4u32);
    (0..depth)
        .map(|n| match regime {
            0 if rng.gen_bool(0.95) => 1.0,
            1 if rng.gen_bool(0.95) => 0.0,
            2 => {
                if (n / block) % 2 == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            _ => rng.gen::<f64>(),
        })
        .collect()
}

/// A saturated tree grown top-down: every occupied cell at level `n` keeps
/// both children with probability `probs[n]`, otherwise one random child.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, span: u64, depth: u32, probs: &[f64]) -> DyadicTree {
    let mut cells: Vec<u64> = (0..span).filter(|_| rng.gen_bool(0.5)).collect();
    if cells.is_empty() {
        cells.push(rng.gen_range(0..span));
    }
    for n in 0..depth as usize {
        let p = probs.get(n).copied().unwrap_or(0.5).clamp(0.0, 1.0);
        let mut next = Vec::with_capacity(cells.len() * 2);
        for &c in &cells {
            if rng.gen_bool(p) {
                next.extend([2 * c, 2 * c + 1]);
            } else {
                next.push(2 * c + rng.gen_range(0..2));
            }
        }
        cells = next;
    }
    let leaves = CellSet::from_sorted(level_universe(span, depth), cells);
    DyadicTree::from_leaf_set(span, depth, leaves).expect("span and depth are within limits")
}
