// Laplacians on chains: harmonic classes are exactly those with vanishing gradient.

use std::sync::Arc;

use posetcalc::calculus::{gradient, harmonic_check, Side};
use posetcalc::grothendieck::{virtual_equal, IsoOptions, VirtualModule};
use posetcalc::module::constant;
use posetcalc::{Matrix, Poset, PosetModule, Result, Q};

pub fn run_example() -> Result<()> {
    let c = Arc::new(Poset::chain(4));
    let o = IsoOptions::default();
    let k = constant::<Q>(&c, 2);
    let m = PosetModule::new(
        c.clone(),
        vec![1, 2, 2, 1],
        vec![Matrix::from_i64(2, 1, &[1, 0]), Matrix::identity(2), Matrix::from_i64(1, 2, &[0, 1])],
    )?;
    for (name, x) in [("k²", k), ("M", m)] {
        let g = gradient(&x);
        let grad0 = virtual_equal(&g.as_virtual(), &VirtualModule::zero(&g.line.line), &o)?.is_isomorphic();
        let xv = VirtualModule::from_module(&x);
        let left = harmonic_check(&xv, &g.line, Side::Left, &o)?;
        let right = harmonic_check(&xv, &g.line, Side::Right, &o)?;
        println!(
            "{name}: grad = 0 {grad0}, left harmonic {}, right harmonic {}, dimension identity {:?}",
            left.is_harmonic(),
            right.is_harmonic(),
            left.dimension_identity
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
