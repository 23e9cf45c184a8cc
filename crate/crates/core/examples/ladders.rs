// Line posets of zigzag and double zigzag ladders.

use std::sync::Arc;

use posetcalc::generators::{gen_ladder, LadderKind};
use posetcalc::{LineMap, Result};

pub fn run_example() -> Result<()> {
    for n in 2..6 {
        let z = Arc::new(gen_ladder(n, LadderKind::Zigzag, false));
        let lz = LineMap::new(&z).line;
        let sizes: Vec<usize> = lz.components().iter().map(|c| c.len()).collect();
        let d = Arc::new(gen_ladder(n, LadderKind::DoubleZigzag, false));
        let ld = LineMap::new(&d).line;
        println!(
            "n={n}: zigzag line components {sizes:?}; double zigzag line poset connected {} type A {}",
            ld.is_connected(),
            ld.is_type_a()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
