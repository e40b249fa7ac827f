// Multiscale entropy of a random measure: chain rule, local classes and the
// uniform/atomic scale profile with its covering-number consequences.

use std::sync::Arc;

use dimlab::measure::{covering_bounds_check, TreeMeasure};
use dimlab::sample::random_tree;
use rand::{Rng, SeedableRng};

pub fn run_example() -> dimlab::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let depth = 14;
    let probs: Vec<f64> = (0..depth).map(|n| if n % 4 == 3 { 0.1 } else { 0.9 }).collect();
    let tree = Arc::new(random_tree(&mut rng, 1, depth, &probs));

    let weights: Vec<f64> = (0..tree.leaves().len()).map(|_| rng.gen::<f64>()).collect();
    let mu = TreeMeasure::from_leaf_weights(tree.clone(), weights)?;
    for n in [1, depth / 2, depth] {
        println!("H_{n:<2} = {:.4}", mu.avg_entropy(n)?);
    }
    let (i, m) = (3, 4);
    let blocks: f64 = mu
        .tree()
        .vertices(i)
        .zip(mu.level_masses(i))
        .map(|(v, p)| mu.local_entropy(v, m).map(|h| p * h))
        .sum::<dimlab::Result<f64>>()?;
    println!("H(D_{}|D_{i}) = {:.6}, block sum = {:.6}", i + m, mu.cond_entropy(i, i + m)?, blocks);

    let counting = TreeMeasure::counting(tree.clone())?;
    let profile = counting.scale_profile(0.1, 3, depth)?;
    println!("I = {:?}", profile.uniform_levels);
    println!("J = {:?}", profile.atomic_levels);
    let report = covering_bounds_check(&tree, &profile, depth)?;
    println!(
        "N = {}; atomic fired {} holds {}; uniform fired {} holds {}",
        report.covering_count, report.atomic.fired, report.atomic.holds, report.uniform.fired, report.uniform.holds
    );
    Ok(())
}

fn main() -> dimlab::Result<()> {
    run_example()
}
