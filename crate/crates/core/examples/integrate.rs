// A module whose gradient is a given indecomposable injective.

use std::sync::Arc;

use posetcalc::calculus::integrate_injective;
use posetcalc::grothendieck::IsoOptions;
use posetcalc::{Poset, Result, Q};

pub fn run_example() -> Result<()> {
    let p = Arc::new(Poset::from_covers(
        &["r", "a", "b", "c", "d"],
        &[("r", "a"), ("r", "b"), ("a", "c"), ("a", "d")],
    )?);
    for e in 0..p.num_covers() {
        let (m, w) = integrate_injective::<Q>(&p, e, &IsoOptions::default())?;
        println!("∇M = [G_{}]: dims {:?}, witness at {} objects", p.cover_label(e), m.dims(), w.components.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
