//! Kan extensions along the front and back maps, divergences and Laplacians.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::grothendieck::{dimvec, virtual_equal, IsoOptions, Verdict, VirtualModule};
use crate::line::{Comma, LineMap};
use crate::matrix::Matrix;
use crate::module::{colimit_over, limit_over, same_poset, Colimit, Limit, PosetModule};

use super::gradient_virtual;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kan {
    /// L_φ
    LeftFront,
    /// L_β
    LeftBack,
    /// R_φ
    RightFront,
    /// R_β
    RightBack,
}

impl Kan {
    fn comma(self) -> Comma {
        match self {
            Kan::LeftFront => Comma::FrontOver,
            Kan::LeftBack => Comma::BackOver,
            Kan::RightFront => Comma::FrontUnder,
            Kan::RightBack => Comma::BackUnder,
        }
    }

    fn is_left(self) -> bool {
        matches!(self, Kan::LeftFront | Kan::LeftBack)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

fn check_line<F: Scalar>(n: &PosetModule<F>, l: &LineMap) -> Result<()> {
    if same_poset(n.poset(), &l.line) {
        Ok(())
    } else {
        Err(Error::PosetMismatch)
    }
}

/// Column (or row) indices of the blocks of `inner` inside the stacked blocks of `outer`.
fn block_indices<F: Scalar>(n: &PosetModule<F>, inner: &[usize], outer: &[usize], outer_off: &[usize]) -> Vec<usize> {
    let pos: HashMap<usize, usize> = outer.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    inner
        .iter()
        .flat_map(|e| {
            let o = outer_off[pos[e]];
            o..o + n.dim(*e)
        })
        .collect()
}

/// Colimit map induced by the inclusion `small ⊆ big` of comma sets.
fn colimit_map<F: Scalar>(n: &PosetModule<F>, small: &Colimit<F>, big: &Colimit<F>) -> Matrix<F> {
    let cols = block_indices(n, &small.objs, &big.objs, &big.offsets);
    let r = small.proj.right_inverse().expect("colimit projection is onto");
    big.proj.select_columns(&cols).mul(&r)
}

/// Limit map induced by forgetting the components outside `small ⊆ big`.
fn limit_map<F: Scalar>(n: &PosetModule<F>, big: &Limit<F>, small: &Limit<F>) -> Matrix<F> {
    let rows = block_indices(n, &small.objs, &big.objs, &big.offsets);
    small.basis.solve(&big.basis.select_rows(&rows)).expect("restricted family is compatible")
}

/// L_F(N)(y) as a colimit over {e : F(e) ≤ y}, R_F(N)(y) as a limit over {e : y ≤ F(e)}.
pub fn kan_extension<F: Scalar>(n: &PosetModule<F>, l: &LineMap, which: Kan) -> Result<PosetModule<F>> {
    check_line(n, l)?;
    let p = &l.base;
    let objs: Vec<Vec<usize>> = (0..p.len()).map(|y| l.comma_objects(y, which.comma())).collect();
    if which.is_left() {
        let cs: Vec<Colimit<F>> = objs.iter().map(|o| colimit_over(n, o)).collect();
        let dims = cs.iter().map(|c| c.dim).collect();
        let maps = p.covers().iter().map(|&(u, v)| colimit_map(n, &cs[u], &cs[v])).collect();
        PosetModule::new(p.clone(), dims, maps)
    } else {
        let ls: Vec<Limit<F>> = objs.iter().map(|o| limit_over(n, o)).collect();
        let dims = ls.iter().map(|c| c.dim).collect();
        let maps = p.covers().iter().map(|&(u, v)| limit_map(n, &ls[u], &ls[v])).collect();
        PosetModule::new(p.clone(), dims, maps)
    }
}

/// Line objects of the neighbourhood of y: the covers into and out of y.
fn neighbourhood_lines(l: &LineMap, y: usize) -> Vec<usize> {
    let mut v: Vec<usize> = l.base.in_covers(y).iter().chain(l.base.out_covers(y)).copied().collect();
    v.sort_unstable();
    v
}

/// Closed forms for tree-shaped bases.
///
/// L_φ(N)(y) = ⊕ N(u,y) over covers into y and R_β(N)(y) = ⊕ N(y,v) over covers out of y, with
/// structure maps given by N. L_β and R_φ use the colimit and limit over the line poset of the
/// neighbourhood of y; their structure maps are transported from [`kan_extension`] through the
/// comparison maps, and set to zero where a comparison map fails to be invertible.
pub fn kan_tree_closed_form<F: Scalar>(n: &PosetModule<F>, l: &LineMap, which: Kan) -> Result<PosetModule<F>> {
    check_line(n, l)?;
    let p = &l.base;
    if !p.is_tree() {
        return Err(Error::Hypothesis("the Hasse diagram of the base is not a tree".into()));
    }
    let line = &l.line;
    match which {
        Kan::LeftFront | Kan::RightBack => {
            let summands: Vec<&[usize]> = (0..p.len())
                .map(|y| if which == Kan::LeftFront { p.in_covers(y) } else { p.out_covers(y) })
                .collect();
            let offs: Vec<Vec<usize>> = summands
                .iter()
                .map(|s| s.iter().scan(0, |acc, &e| Some(std::mem::replace(acc, *acc + n.dim(e)))).collect())
                .collect();
            let dims: Vec<usize> = summands.iter().map(|s| s.iter().map(|&e| n.dim(e)).sum()).collect();
            let maps = p
                .covers()
                .iter()
                .enumerate()
                .map(|(c, &(y, y2))| {
                    let mut m = Matrix::zeros(dims[y2], dims[y]);
                    if which == Kan::LeftFront {
                        // N(u,y) → N(y,y2) along the line cover (u,y) < (y,y2)
                        for (i, &e) in summands[y].iter().enumerate() {
                            let k = line.cover_id(e, c).expect("composable pair");
                            m.set_block(offs[y2][summands[y2].iter().position(|&f| f == c).unwrap()], offs[y][i], n.map(k));
                        }
                    } else {
                        // N(y,y2) → N(y2,w) along (y,y2) < (y2,w)
                        let i = summands[y].iter().position(|&f| f == c).unwrap();
                        for (j, &e) in summands[y2].iter().enumerate() {
                            let k = line.cover_id(c, e).expect("composable pair");
                            m.set_block(offs[y2][j], offs[y][i], n.map(k));
                        }
                    }
                    m
                })
                .collect();
            PosetModule::new(p.clone(), dims, maps)
        }
        Kan::LeftBack => {
            let full = kan_extension(n, l, which)?;
            let big: Vec<Colimit<F>> = (0..p.len()).map(|y| colimit_over(n, &l.comma_objects(y, Comma::BackOver))).collect();
            let small: Vec<Colimit<F>> = (0..p.len()).map(|y| colimit_over(n, &neighbourhood_lines(l, y))).collect();
            let cmp: Vec<Matrix<F>> = (0..p.len()).map(|y| colimit_map(n, &small[y], &big[y])).collect();
            let dims: Vec<usize> = small.iter().map(|c| c.dim).collect();
            let maps = p
                .covers()
                .iter()
                .enumerate()
                .map(|(c, &(y, y2))| match cmp[y2].inverse() {
                    Some(inv) => inv.mul(full.map(c)).mul(&cmp[y]),
                    None => Matrix::zeros(dims[y2], dims[y]),
                })
                .collect();
            PosetModule::new(p.clone(), dims, maps)
        }
        Kan::RightFront => {
            let full = kan_extension(n, l, which)?;
            let big: Vec<Limit<F>> = (0..p.len()).map(|y| limit_over(n, &l.comma_objects(y, Comma::FrontUnder))).collect();
            let small: Vec<Limit<F>> = (0..p.len()).map(|y| limit_over(n, &neighbourhood_lines(l, y))).collect();
            let cmp: Vec<Matrix<F>> = (0..p.len()).map(|y| limit_map(n, &big[y], &small[y])).collect();
            let dims: Vec<usize> = small.iter().map(|c| c.dim).collect();
            let maps = p
                .covers()
                .iter()
                .enumerate()
                .map(|(c, &(y, y2))| match cmp[y].inverse() {
                    Some(inv) => cmp[y2].mul(full.map(c)).mul(&inv),
                    None => Matrix::zeros(dims[y2], dims[y]),
                })
                .collect();
            PosetModule::new(p.clone(), dims, maps)
        }
    }
}

/// Left: [L_φ N] − [L_β N]. Right: [R_φ N] − [R_β N].
pub fn divergence<F: Scalar>(n: &PosetModule<F>, l: &LineMap, side: Side) -> Result<VirtualModule<F>> {
    let (a, b) = match side {
        Side::Left => (Kan::LeftFront, Kan::LeftBack),
        Side::Right => (Kan::RightFront, Kan::RightBack),
    };
    VirtualModule::new(&l.base, vec![kan_extension(n, l, a)?], vec![kan_extension(n, l, b)?])
}

/// The divergence extended additively; formal differences are flattened summand by summand.
pub fn divergence_virtual<F: Scalar>(x: &VirtualModule<F>, l: &LineMap, side: Side) -> Result<VirtualModule<F>> {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for m in &x.plus {
        let d = divergence(m, l, side)?;
        plus.extend(d.plus);
        minus.extend(d.minus);
    }
    for m in &x.minus {
        let d = divergence(m, l, side)?;
        plus.extend(d.minus);
        minus.extend(d.plus);
    }
    VirtualModule::new(&l.base, plus, minus)
}

/// Δ⁰ = ∇*∘∇ for the left side, Δ₀ = ∇_*∘∇ for the right.
pub fn laplacian<F: Scalar>(x: &VirtualModule<F>, l: &LineMap, side: Side) -> Result<VirtualModule<F>> {
    if !same_poset(x.poset(), &l.base) {
        return Err(Error::PosetMismatch);
    }
    divergence_virtual(&gradient_virtual(x, l), l, side)
}

#[derive(Clone, Debug)]
pub struct HarmonicReport<F: Scalar> {
    pub laplacian: VirtualModule<F>,
    pub verdict: Verdict<F>,
    /// On a rooted tree, for a harmonic class: whether dimensions change equally along every cover.
    pub dimension_identity: Option<bool>,
}

impl<F: Scalar> HarmonicReport<F> {
    pub fn is_harmonic(&self) -> bool {
        self.verdict.is_isomorphic()
    }
}

pub fn harmonic_check<F: Scalar>(
    x: &VirtualModule<F>,
    l: &LineMap,
    side: Side,
    opts: &IsoOptions,
) -> Result<HarmonicReport<F>> {
    let lap = laplacian(x, l, side)?;
    let verdict = virtual_equal(&lap, &VirtualModule::zero(&l.base), opts)?;
    let dimension_identity = (verdict.is_isomorphic() && side == Side::Left && l.base.is_rooted_tree()).then(|| {
        let d = dimvec(x);
        l.base.covers().iter().all(|&(u, v)| d.get(v) == d.get(u))
    });
    Ok(HarmonicReport { laplacian: lap, verdict, dimension_identity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::grothendieck::{iso_check, DimVector};
    use crate::module::{constant, constant_zero_maps};
    use crate::poset::Poset;
    use std::sync::Arc;

    #[test]
    fn one_cover() {
        let c = Arc::new(Poset::chain(2));
        let l = LineMap::new(&c);
        let n = constant::<Q>(&l.line, 1);
        let lf = kan_extension(&n, &l, Kan::LeftFront).unwrap();
        assert_eq!(lf.dims(), &[0, 1]);
        let lb = kan_extension(&n, &l, Kan::LeftBack).unwrap();
        assert_eq!(lb.dims(), &[1, 1]);
        assert!(lb.map(0).is_identity());
        let rb = kan_extension(&n, &l, Kan::RightBack).unwrap();
        assert_eq!(rb.dims(), &[1, 0]);
    }

    #[test]
    fn chain_front_over() {
        let c = Arc::new(Poset::chain(3));
        let l = LineMap::new(&c);
        let n = constant::<Q>(&l.line, 1);
        assert_eq!(kan_extension(&n, &l, Kan::LeftFront).unwrap().dims(), &[0, 1, 1]);
    }

    #[test]
    fn chain_closed_forms() {
        let c = Arc::new(Poset::chain(3));
        let l = LineMap::new(&c);
        let n = PosetModule::<Q>::new(l.line.clone(), vec![2, 3], vec![Matrix::from_i64(3, 2, &[1, 0, 0, 1, 1, 1])])
            .unwrap();
        let lf = kan_tree_closed_form(&n, &l, Kan::LeftFront).unwrap();
        assert_eq!(lf.dim(1), 2);
        let rb = kan_tree_closed_form(&n, &l, Kan::RightBack).unwrap();
        assert_eq!(rb.dim(1), 3);
        for k in [Kan::LeftFront, Kan::LeftBack, Kan::RightFront, Kan::RightBack] {
            let a = kan_extension(&n, &l, k).unwrap();
            let b = kan_tree_closed_form(&n, &l, k).unwrap();
            assert!(iso_check(&a, &b, &IsoOptions::default()).unwrap().is_isomorphic(), "{k:?}");
        }
    }

    #[test]
    fn star_right_back() {
        let s = Arc::new(Poset::from_covers(&["r", "a", "b"], &[("r", "a"), ("r", "b")]).unwrap());
        let l = LineMap::new(&s);
        let n = constant::<Q>(&l.line, 1);
        let rb = kan_tree_closed_form(&n, &l, Kan::RightBack).unwrap();
        assert_eq!(rb.dim(0), 2);
        assert_eq!(kan_extension(&n, &l, Kan::RightBack).unwrap().dim(0), 2);
    }

    #[test]
    fn right_back_vanishes_at_maxima() {
        let s = Arc::new(Poset::from_covers(&["r", "a", "b"], &[("r", "a"), ("r", "b")]).unwrap());
        let l = LineMap::new(&s);
        let rb = kan_extension(&constant::<Q>(&l.line, 3), &l, Kan::RightBack).unwrap();
        assert_eq!((rb.dim(1), rb.dim(2)), (0, 0));
    }

    #[test]
    fn side_branch_breaks_the_closed_form() {
        // 1,2 ⋖ 0 ⋖ 3,4 with N = k on (0,4) only; (0,4) lies over 3 via its source
        let p = Arc::new(
            Poset::from_covers(&["0", "1", "2", "3", "4"], &[("1", "0"), ("2", "0"), ("0", "3"), ("0", "4")]).unwrap(),
        );
        let l = LineMap::new(&p);
        let e = p.cover_id(0, 4).unwrap();
        let dims: Vec<usize> = (0..l.line.len()).map(|i| usize::from(i == e)).collect();
        let n = PosetModule::<Q>::from_fn(l.line.clone(), dims.clone(), |_, a, b| Matrix::zeros(dims[b], dims[a])).unwrap();
        let y = p.index_of("3").unwrap();
        assert_eq!(kan_extension(&n, &l, Kan::LeftBack).unwrap().dim(y), 1);
        assert_eq!(kan_tree_closed_form(&n, &l, Kan::LeftBack).unwrap().dim(y), 0);
        // L_φ has no such problem
        let a = kan_extension(&n, &l, Kan::LeftFront).unwrap();
        let b = kan_tree_closed_form(&n, &l, Kan::LeftFront).unwrap();
        assert_eq!(a.dims(), b.dims());
    }

    #[test]
    fn closed_form_rejects_non_trees() {
        let d = Arc::new(
            Poset::from_covers(&["bot", "a", "b", "top"], &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])
                .unwrap(),
        );
        let l = LineMap::new(&d);
        let n = constant::<Q>(&l.line, 1);
        assert!(matches!(kan_tree_closed_form(&n, &l, Kan::LeftFront), Err(Error::Hypothesis(_))));
        assert!(kan_extension(&n, &l, Kan::LeftBack).is_ok());
    }

    #[test]
    fn laplacians_of_constants() {
        let c = Arc::new(Poset::chain(4));
        let l = LineMap::new(&c);
        let o = IsoOptions::default();
        let k = VirtualModule::from_module(&constant::<Q>(&c, 1));
        for side in [Side::Left, Side::Right] {
            let r = harmonic_check(&k, &l, side, &o).unwrap();
            assert!(r.is_harmonic());
        }
        let kk0 = VirtualModule::difference(&constant::<Q>(&c, 1), &constant_zero_maps(&c, 1)).unwrap();
        let r = harmonic_check(&kk0, &l, Side::Left, &o).unwrap();
        assert!(r.is_harmonic());
        assert_eq!(r.dimension_identity, Some(true));
        let m = PosetModule::<Q>::new(c.clone(), vec![1, 2, 2, 2], {
            let mut v = vec![Matrix::from_i64(2, 1, &[1, 0])];
            v.extend([Matrix::identity(2), Matrix::identity(2)]);
            v
        })
        .unwrap();
        assert!(!harmonic_check(&VirtualModule::from_module(&m), &l, Side::Left, &o).unwrap().is_harmonic());
        assert_eq!(dimvec(&divergence(&PosetModule::<Q>::zero(&l.line), &l, Side::Left).unwrap()), DimVector::zero(4));
    }
}
