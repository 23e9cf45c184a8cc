//! A module whose gradient is an indecomposable injective, on rooted trees.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::grothendieck::{virtual_equal, IsoOptions, Verdict, VirtualModule};
use crate::line::LineMap;
use crate::matrix::Matrix;
use crate::module::{injective_at, ModuleMap, PosetModule};
use crate::poset::Poset;

use super::gradient_on;

/// e_i ↦ e_{i+1} from k^{d} into k^{d+1}: a zero row over the identity.
fn lower_inclusion<F: Scalar>(d: usize) -> Matrix<F> {
    let mut a = Matrix::zeros(d + 1, d);
    for i in 0..d {
        a[(i + 1, i)] = F::one();
    }
    a
}

/// The inclusion above, padded by a zero column to a square d×d matrix.
fn shift<F: Scalar>(d: usize) -> Matrix<F> {
    let mut b = Matrix::zeros(d, d);
    for i in 0..d.saturating_sub(1) {
        b[(i + 1, i)] = F::one();
    }
    b
}

/// Builds M on a rooted tree with ∇[M] = [G_e] for the cover `e`, returning M and the witness
/// isomorphism φ*M ⊕ 0 → G_e ⊕ β*M found by [`virtual_equal`].
///
/// On the path root = v₀ ⋖ … ⋖ v_n = y, M(v_i) = k^i with inclusions into the last coordinates.
/// Every other object w hangs off a unique nearest path object v_i and gets M(w) = k^i, with the
/// shift matrix on every cover of that branch.
pub fn integrate_injective<F: Scalar>(
    p: &Arc<Poset>,
    e: usize,
    opts: &IsoOptions,
) -> Result<(PosetModule<F>, ModuleMap<F>)> {
    if !p.is_rooted_tree() {
        return Err(Error::Hypothesis("the Hasse diagram is not a rooted tree".into()));
    }
    if e >= p.num_covers() {
        return Err(Error::UnknownObject(format!("cover #{e}")));
    }
    let root = p.minimal()[0];
    let y = p.cover(e).1;
    let path = p.path(root, y).expect("root is below everything");
    let mut idx = vec![usize::MAX; p.len()];
    for (i, &v) in path.iter().enumerate() {
        idx[v] = i;
    }
    // anchor index of every object, in topological order
    let mut anchor = vec![0; p.len()];
    for &v in p.topo_order() {
        anchor[v] = if idx[v] != usize::MAX { idx[v] } else { anchor[p.pred(v)[0]] };
    }
    let m = PosetModule::from_fn(p.clone(), anchor.clone(), |_, u, v| {
        if idx[u] != usize::MAX && idx[v] != usize::MAX {
            lower_inclusion(idx[u])
        } else {
            shift(anchor[v])
        }
    })?;
    let line = LineMap::new(p);
    let grad = gradient_on(&m, &line).as_virtual();
    let g = VirtualModule::from_module(&injective_at(&line.line, e));
    match virtual_equal(&grad, &g, opts)? {
        Verdict::Isomorphic { witness } => Ok((m, witness)),
        v => Err(Error::Hypothesis(format!("gradient is not the injective: {}", v.name()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    #[test]
    fn chain() {
        let c = Arc::new(Poset::chain(3));
        let (m, _) = integrate_injective::<Q>(&c, 1, &IsoOptions::default()).unwrap();
        assert_eq!(m.dims(), &[0, 1, 2]);
        assert_eq!(m.map(1), &Matrix::from_i64(2, 1, &[0, 1]));
    }

    #[test]
    fn first_cover_with_branches() {
        let p = Arc::new(
            Poset::from_covers(&["r", "a", "b", "c", "d"], &[("r", "a"), ("r", "b"), ("a", "c"), ("b", "d")]).unwrap(),
        );
        let e = p.cover_id(0, 1).unwrap();
        let (m, _) = integrate_injective::<Q>(&p, e, &IsoOptions::default()).unwrap();
        assert_eq!(m.dims(), &[0, 1, 0, 1, 0]);
        for e in 0..p.num_covers() {
            assert!(integrate_injective::<Q>(&p, e, &IsoOptions::default()).is_ok());
        }
    }

    #[test]
    fn needs_rooted_tree() {
        let p = Arc::new(Poset::from_covers(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap());
        assert!(integrate_injective::<Q>(&p, 0, &IsoOptions::default()).is_err());
    }
}
