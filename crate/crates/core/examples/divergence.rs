// Kan extensions along φ and β, divergences, and where the tree closed forms go wrong.

use std::sync::Arc;

use posetcalc::calculus::{divergence, kan_extension, kan_tree_closed_form, Kan, Side};
use posetcalc::grothendieck::dimvec;
use posetcalc::module::constant;
use posetcalc::{LineMap, Matrix, Poset, PosetModule, Result, Q};

pub fn run_example() -> Result<()> {
    let c = Arc::new(Poset::chain(3));
    let l = LineMap::new(&c);
    let n = PosetModule::<Q>::new(l.line.clone(), vec![2, 3], vec![Matrix::from_i64(3, 2, &[1, 0, 0, 1, 1, 1])])?;
    for k in [Kan::LeftFront, Kan::LeftBack, Kan::RightFront, Kan::RightBack] {
        println!("{k:?}: dims {:?}", kan_extension(&n, &l, k)?.dims());
    }
    for side in [Side::Left, Side::Right] {
        println!("div {side:?} = {}", dimvec(&divergence(&n, &l, side)?));
    }

    // 1,2 ⋖ 0 ⋖ 3,4 with N = k only on (0,4)
    let p = Arc::new(Poset::from_covers(&["0", "1", "2", "3", "4"], &[("1", "0"), ("2", "0"), ("0", "3"), ("0", "4")])?);
    let l = LineMap::new(&p);
    let e = p.cover_id(0, 4).expect("cover");
    let dims: Vec<usize> = (0..l.line.len()).map(|i| usize::from(i == e)).collect();
    let n = PosetModule::<Q>::from_fn(l.line.clone(), dims.clone(), |_, a, b| Matrix::zeros(dims[b], dims[a]))?;
    let a = kan_extension(&n, &l, Kan::LeftBack)?;
    let b = kan_tree_closed_form(&n, &l, Kan::LeftBack)?;
    println!("L_β N at 3: colimit {} vs closed form {}", a.dim(3), b.dim(3));

    let k = constant::<Q>(&l.line, 1);
    println!("L_φ k = {:?}", kan_extension(&k, &l, Kan::LeftFront)?.dims());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
