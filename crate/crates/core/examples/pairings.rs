// Hom and Euler pairings, Ext, cohomology and the pairing identities around ∇.

use std::sync::Arc;

use posetcalc::grothendieck::{dimvec, VirtualModule};
use posetcalc::module::{constant, projective_at, simple_at};
use posetcalc::pairings::{
    cohomology, euler_chi, euler_form, ext_dims, hom_pairing, pairing_with_gradient, projective_resolution,
    pseudo_adjointness_check,
};
use posetcalc::{LineMap, Matrix, Poset, PosetModule, Result, Q};

pub fn run_example() -> Result<()> {
    let circle = Arc::new(Poset::from_covers(
        &["a", "b", "c", "d"],
        &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
    )?);
    let k = constant::<Q>(&circle, 1);
    println!("H*(circle; k) = {:?}", cohomology(&k)?);
    println!("χ(k, k) = {}, nerve χ = {}", euler_chi(&k, &k)?, circle.nerve_euler_characteristic());
    let r = projective_resolution(&simple_at::<Q>(&circle, 0));
    println!("resolution of S_a: {:?}, exact {}", r.gens, r.verify_exact(&simple_at(&circle, 0)));

    let c = Arc::new(Poset::chain(3));
    let m = PosetModule::<Q>::new(c.clone(), vec![1, 2, 1], vec![Matrix::from_i64(2, 1, &[1, 0]), Matrix::from_i64(1, 2, &[0, 1])])?;
    let n = simple_at::<Q>(&c, 1);
    println!("Ext(M, S_1) = {:?}", ext_dims(&m, &n)?);
    let (vm, vn) = (VirtualModule::from_module(&m), VirtualModule::from_module(&n));
    println!("χ(M, S_1) = {} = euler form {}", euler_chi(&m, &n)?, euler_form(&c, &dimvec(&vm), &dimvec(&vn))?);
    println!("⟨F_0, M⟩ = {}", hom_pairing(&VirtualModule::from_module(&projective_at(&c, 0)), &vm)?);

    let l = LineMap::new(&c);
    let y = PosetModule::<Q>::new(l.line.clone(), vec![1, 2], vec![Matrix::from_i64(2, 1, &[1, 1])])?;
    println!("χ(∇M, Y) three ways: {:?}", pairing_with_gradient(&m, &y, &l)?);
    let s = simple_at::<Q>(&c, 2);
    println!("pseudo adjointness: {:?}", pseudo_adjointness_check(&s, &y, &l)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
