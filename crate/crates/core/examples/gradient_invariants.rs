// Gradient and rank invariant detect different things.
//
// Two modules on 0 < 1 < 2 share a vanishing gradient but not their rank invariant; two modules on
// the seven-object poset ∅ < a,b,c,d < m < ∞ share their rank invariant but not their gradient.

use std::sync::Arc;

use posetcalc::calculus::gradient;
use posetcalc::grothendieck::{module_rank_invariant, virtual_equal, IsoOptions, Verdict, VirtualModule};
use posetcalc::{Matrix, Poset, PosetModule, Result, Q};

fn q(r: usize, c: usize, v: &[i64]) -> Matrix<Q> {
    Matrix::from_i64(r, c, v)
}

pub fn chain_pair() -> Result<(PosetModule<Q>, PosetModule<Q>)> {
    let c = Arc::new(Poset::chain(3));
    let m = PosetModule::new(c.clone(), vec![2, 2, 2], vec![q(2, 2, &[1, 0, 0, 0]), q(2, 2, &[0, 0, 0, 1])])?;
    let n = PosetModule::new(c, vec![2, 2, 2], vec![q(2, 2, &[1, 0, 0, 0]), q(2, 2, &[1, 0, 0, 0])])?;
    Ok((m, n))
}

pub fn seven() -> Result<Arc<Poset>> {
    let mut covers = vec![("m", "inf")];
    for x in ["a", "b", "c", "d"] {
        covers.push(("empty", x));
        covers.push((x, "m"));
    }
    Ok(Arc::new(Poset::from_covers(&["empty", "a", "b", "c", "d", "m", "inf"], &covers)?))
}

/// k on a,b,c,d and k² on m, with the four lines (1,0), (0,1), γ, δ.
pub fn four_lines(p: &Arc<Poset>, gamma: (i64, i64), delta: (i64, i64)) -> Result<PosetModule<Q>> {
    PosetModule::from_labeled(
        p.clone(),
        &[("a", 1), ("b", 1), ("c", 1), ("d", 1), ("m", 2)],
        &[
            (("a", "m"), q(2, 1, &[1, 0])),
            (("b", "m"), q(2, 1, &[0, 1])),
            (("c", "m"), q(2, 1, &[gamma.0, gamma.1])),
            (("d", "m"), q(2, 1, &[delta.0, delta.1])),
        ],
    )
}

/// ∇[M] vs ∇[N].
pub fn compare_gradients(m: &PosetModule<Q>, n: &PosetModule<Q>) -> Result<Verdict<Q>> {
    virtual_equal(&gradient(m).as_virtual(), &gradient(n).as_virtual(), &IsoOptions::default())
}

pub fn run_example() -> Result<()> {
    let (m, n) = chain_pair()?;
    for (name, x) in [("M", &m), ("N", &n)] {
        let g = gradient(x);
        let v = virtual_equal(&g.as_virtual(), &VirtualModule::zero(&g.line.line), &IsoOptions::default())?;
        let rk = module_rank_invariant(x).get(0, 2);
        println!("{name}: grad = 0 is {}, rk {name}(0<2) = {rk}", v.name());
    }

    let p = seven()?;
    // N has γ = (x,y), δ = (s,t); M has γ = (z,w), δ = (u,v)
    let n = four_lines(&p, (1, 1), (1, 2))?;
    let m = four_lines(&p, (2, 1), (1, 2))?;
    println!("equal rank invariants: {}", module_rank_invariant(&m) == module_rank_invariant(&n));
    let v = compare_gradients(&m, &n)?;
    println!("wxtu = 2, zyvs = 4: {}", v.name());
    if let Verdict::HomDiffers { hom_mn, hom_mm, hom_nn } = v {
        println!("  dim Hom = {hom_mn}, against {hom_mm} and {hom_nn}");
    }
    let m2 = four_lines(&p, (2, 2), (1, 2))?;
    println!("wxtu = zyvs = 4: {}", compare_gradients(&m2, &n)?.name());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
