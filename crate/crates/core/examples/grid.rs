// A random grid module with surjective horizontal maps and the grid of its gradient.

use posetcalc::calculus::gradient;
use posetcalc::generators::gen_grid;
use posetcalc::grothendieck::dimvec;
use posetcalc::io::report_dimvec_grid;
use posetcalc::{Result, Q};

pub fn run_example() -> Result<()> {
    let m = gen_grid::<Q>(10, 10, 2024, 4)?;
    print!("{}", report_dimvec_grid(m.poset(), &dimvec(&posetcalc::grothendieck::VirtualModule::from_module(&m))).text);
    let g = gradient(&m);
    print!("{}", report_dimvec_grid(&g.line.line, &dimvec(&g.as_virtual())).text);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
