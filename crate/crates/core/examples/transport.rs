// Vanishing gradient on a line connected tree, certified by a transport system.

use std::sync::Arc;

use posetcalc::calculus::{random_transport_module, vanishing_on_tree, VanishingVerdict};
use posetcalc::generators::{random_line_connected_tree, seeded};
use posetcalc::grothendieck::IsoOptions;
use posetcalc::{Matrix, PosetModule, Result, TreeSubgraph, Q};

pub fn run_example() -> Result<()> {
    let mut rng = seeded(11);
    let p = Arc::new(random_line_connected_tree(&mut rng, 7));
    let t = TreeSubgraph::new(&p, (0..p.num_covers()).collect())?;
    let (m, _) = random_transport_module::<Q>(&p, 3, 2, &mut rng)?;
    let o = IsoOptions::default();
    match vanishing_on_tree(&m, &t, &o)? {
        VanishingVerdict::Certified(c) => {
            println!("certified: all checks {}", c.all_checks_pass());
            println!("γ₀ rank {}, kernels constant {}", c.system.gamma0.rank(), c.ker_im.ker_constant);
        }
        v => println!("unexpected: {v:?}"),
    }

    // change one map and the certificate is gone
    let mut maps = m.maps().to_vec();
    let (u, v) = p.cover(0);
    maps[0] = Matrix::zeros(m.dim(v), m.dim(u));
    let broken = PosetModule::new(p.clone(), m.dims().to_vec(), maps)?;
    match vanishing_on_tree(&broken, &t, &o)? {
        VanishingVerdict::Refuted(v) => println!("refuted: {}", v.name()),
        v => println!("unexpected: {v:?}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
