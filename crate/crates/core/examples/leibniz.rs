// The product rule ∇([M]·[N]) = ∇[M]·φ*[N] + β*[M]·∇[N], with an explicit witness.

use std::sync::Arc;

use posetcalc::calculus::leibniz_check;
use posetcalc::generators::{random_module, random_tree_poset, seeded};
use posetcalc::grothendieck::IsoOptions;
use posetcalc::{PosetModule, Result, Q};

pub fn run_example() -> Result<()> {
    let mut rng = seeded(5);
    let p = Arc::new(random_tree_poset(&mut rng, 5));
    let m: PosetModule<Q> = random_module(&mut rng, &p, 2);
    let n: PosetModule<Q> = random_module(&mut rng, &p, 2);
    let r = leibniz_check(&m, &n, &IsoOptions::default())?;
    println!("dims M {:?}, N {:?}: {}", m.dims(), n.dims(), r.verdict.name());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
