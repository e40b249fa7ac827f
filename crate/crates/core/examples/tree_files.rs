// Generator specs from JSON, and the text formats for trees, measures and
// grid sets.

use dimlab::arithmetic::GridSetD;
use dimlab::generators::GeneratorSpec;
use dimlab::{DyadicTree, TreeMeasure};

pub fn run_example() -> dimlab::Result<()> {
    let spec: GeneratorSpec = serde_json::from_str(r#"{"type": "ifs", "r": "1/4", "translations": [0, "3/8", "3/4"]}"#)?;
    let generated = spec.build(6)?;
    let text = generated.tree.to_text();
    println!("{}:\n{text}", spec.label());
    assert_eq!(DyadicTree::from_text(&text)?, generated.tree);

    let mu = TreeMeasure::splitting(generated.tree.clone())?;
    let mtext = mu.to_text();
    println!("measure file: {} lines", mtext.lines().count());
    TreeMeasure::from_text(&mtext)?.check_consistency()?;

    let grid = GridSetD::product(&[&generated.tree, &generated.tree])?;
    let gtext = grid.to_text();
    println!("grid file: {} cells", gtext.lines().count() - 1);
    assert_eq!(GridSetD::from_text(&gtext)?, grid);
    Ok(())
}

fn main() -> dimlab::Result<()> {
    run_example()
}
