//! Modules over a poset: a vector space per object and a matrix per cover.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::line::LineMap;
use crate::matrix::Matrix;
use crate::poset::Poset;

/// A functor from a poset to finite dimensional vector spaces.
///
/// The map on cover `k` has shape `dims[v] × dims[u]` where `poset.cover(k) = (u, v)`.
pub struct PosetModule<F: Scalar> {
    poset: Arc<Poset>,
    dims: Vec<usize>,
    maps: Vec<Matrix<F>>,
    cache: Mutex<HashMap<(usize, usize), Matrix<F>>>,
}

impl<F: Scalar> Clone for PosetModule<F> {
    fn clone(&self) -> Self {
        PosetModule::new_unchecked(self.poset.clone(), self.dims.clone(), self.maps.clone())
    }
}

impl<F: Scalar> PartialEq for PosetModule<F> {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.poset, &o.poset) || self.poset == o.poset) && self.dims == o.dims && self.maps == o.maps
    }
}

impl<F: Scalar> fmt::Debug for PosetModule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = (0..self.poset.len()).map(|x| format!("{}:{}", self.poset.label(x), self.dims[x])).collect();
        write!(f, "PosetModule{{dims: [{}], maps: {:?}}}", dims.join(", "), self.maps)
    }
}

pub(crate) fn same_poset(a: &Arc<Poset>, b: &Arc<Poset>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl<F: Scalar> PosetModule<F> {
    /// Checks shapes and path independence.
    pub fn new(poset: Arc<Poset>, dims: Vec<usize>, maps: Vec<Matrix<F>>) -> Result<Self> {
        if dims.len() != poset.len() {
            return Err(Error::Shape(format!("{} dimensions for {} objects", dims.len(), poset.len())));
        }
        if maps.len() != poset.num_covers() {
            return Err(Error::Shape(format!("{} maps for {} covers", maps.len(), poset.num_covers())));
        }
        for (k, m) in maps.iter().enumerate() {
            let (u, v) = poset.cover(k);
            if m.shape() != (dims[v], dims[u]) {
                return Err(Error::Shape(format!(
                    "map on {} has shape {:?}, expected {:?}",
                    poset.cover_label(k),
                    m.shape(),
                    (dims[v], dims[u])
                )));
            }
        }
        let m = PosetModule::new_unchecked(poset, dims, maps);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(poset: Arc<Poset>, dims: Vec<usize>, maps: Vec<Matrix<F>>) -> Self {
        PosetModule { poset, dims, maps, cache: Mutex::new(HashMap::new()) }
    }

    /// Maps given by a function of the cover `(id, u, v)`.
    pub fn from_fn(
        poset: Arc<Poset>,
        dims: Vec<usize>,
        mut f: impl FnMut(usize, usize, usize) -> Matrix<F>,
    ) -> Result<Self> {
        let maps = (0..poset.num_covers())
            .map(|k| {
                let (u, v) = poset.cover(k);
                f(k, u, v)
            })
            .collect();
        PosetModule::new(poset, dims, maps)
    }

    /// Dimensions and maps addressed by label; unspecified maps must have a zero-sized side.
    pub fn from_labeled(
        poset: Arc<Poset>,
        dims: &[(&str, usize)],
        maps: &[((&str, &str), Matrix<F>)],
    ) -> Result<Self> {
        let mut d = vec![0; poset.len()];
        for &(l, n) in dims {
            d[poset.require(l)?] = n;
        }
        let mut given: HashMap<usize, Matrix<F>> = HashMap::new();
        for ((u, v), m) in maps {
            let (a, b) = (poset.require(u)?, poset.require(v)?);
            let k = poset.cover_id(a, b).ok_or_else(|| Error::Shape(format!("{u} ⋖ {v} is not a cover")))?;
            given.insert(k, m.clone());
        }
        let ms = (0..poset.num_covers())
            .map(|k| {
                let (u, v) = poset.cover(k);
                given.remove(&k).unwrap_or_else(|| Matrix::zeros(d[v], d[u]))
            })
            .collect();
        PosetModule::new(poset, d, ms)
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn maps(&self) -> &[Matrix<F>] {
        &self.maps
    }

    /// Matrix on cover `k`.
    pub fn map(&self, k: usize) -> &Matrix<F> {
        &self.maps[k]
    }

    /// Path independence, checked by a sweep over each object's up-set.
    pub fn validate(&self) -> Result<()> {
        let p = &self.poset;
        if p.is_tree() {
            return Ok(());
        }
        for x in 0..p.len() {
            let mut comp: HashMap<usize, (Matrix<F>, Vec<usize>)> = HashMap::new();
            comp.insert(x, (Matrix::identity(self.dims[x]), vec![x]));
            for &y in p.topo_order() {
                if y == x || !p.leq(x, y) {
                    continue;
                }
                for &k in p.in_covers(y) {
                    let (w, _) = p.cover(k);
                    let Some((cw, pw)) = comp.get(&w) else { continue };
                    let cand = self.maps[k].mul(cw);
                    let mut path = pw.clone();
                    path.push(y);
                    match comp.get(&y) {
                        None => {
                            comp.insert(y, (cand, path));
                        }
                        Some((c, q)) if *c != cand => {
                            let names = |v: &[usize]| v.iter().map(|&i| p.label(i).to_string()).collect();
                            return Err(Error::PathDisagreement {
                                from: p.label(x).into(),
                                to: p.label(y).into(),
                                path_a: names(q),
                                path_b: names(&path),
                            });
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(())
    }

    /// The induced map M(x ≤ y).
    pub fn eval(&self, x: usize, y: usize) -> Result<Matrix<F>> {
        let p = &self.poset;
        if !p.leq(x, y) {
            return Err(Error::NotComparable(p.label(x).into(), p.label(y).into()));
        }
        if x == y {
            return Ok(Matrix::identity(self.dims[x]));
        }
        if let Some(k) = p.cover_id(x, y) {
            return Ok(self.maps[k].clone());
        }
        if let Some(m) = self.cache.lock().expect("cache lock").get(&(x, y)) {
            return Ok(m.clone());
        }
        let path = p.path(x, y).expect("x ≤ y");
        let mut acc = Matrix::identity(self.dims[x]);
        for w in path.windows(2) {
            acc = self.maps[p.cover_id(w[0], w[1]).expect("path of covers")].mul(&acc);
        }
        self.cache.lock().expect("cache lock").insert((x, y), acc.clone());
        Ok(acc)
    }

    pub fn zero(poset: &Arc<Poset>) -> Self {
        constant_zero_maps(poset, 0)
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        direct_sum_all(&self.poset, &[self, o])
    }

    /// Object-wise tensor product over the field.
    pub fn tensor(&self, o: &Self) -> Result<Self> {
        if !same_poset(&self.poset, &o.poset) {
            return Err(Error::PosetMismatch);
        }
        let dims = self.dims.iter().zip(&o.dims).map(|(a, b)| a * b).collect();
        let maps = self.maps.iter().zip(&o.maps).map(|(a, b)| a.kron(b)).collect();
        Ok(PosetModule::new_unchecked(self.poset.clone(), dims, maps))
    }

    /// Restriction along a monotone object map `f: Q → P`.
    pub fn restrict(&self, q: &Arc<Poset>, f: &[usize]) -> Result<Self> {
        if f.len() != q.len() {
            return Err(Error::Shape(format!("object map has {} entries for {} objects", f.len(), q.len())));
        }
        let dims = f.iter().map(|&x| self.dims[x]).collect();
        let mut maps = Vec::with_capacity(q.num_covers());
        for &(a, b) in q.covers() {
            if !self.poset.leq(f[a], f[b]) {
                return Err(Error::NotMonotone(format!(
                    "{} ⋖ {} maps to {} ≰ {}",
                    q.label(a),
                    q.label(b),
                    self.poset.label(f[a]),
                    self.poset.label(f[b])
                )));
            }
            maps.push(self.eval(f[a], f[b])?);
        }
        Ok(PosetModule::new_unchecked(q.clone(), dims, maps))
    }

    /// φ*M on the line poset.
    pub fn front_pullback(&self, l: &LineMap) -> Self {
        assert!(same_poset(&self.poset, &l.base), "line map over another poset");
        self.restrict(&l.line, &l.front).expect("front map is monotone")
    }

    /// β*M on the line poset.
    pub fn back_pullback(&self, l: &LineMap) -> Self {
        assert!(same_poset(&self.poset, &l.base), "line map over another poset");
        self.restrict(&l.line, &l.back).expect("back map is monotone")
    }

    /// Same data over an equal poset object.
    pub fn rebase(&self, poset: &Arc<Poset>) -> Result<Self> {
        if !same_poset(&self.poset, poset) {
            return Err(Error::PosetMismatch);
        }
        Ok(PosetModule::new_unchecked(poset.clone(), self.dims.clone(), self.maps.clone()))
    }

    /// Every cover map is invertible.
    pub fn is_locally_constant(&self) -> bool {
        self.maps.iter().all(|m| m.is_invertible())
    }

    /// Every non-identity map is zero.
    pub fn is_virtually_trivial(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }

    /// Object-wise kernels of the cover maps, as a module over the line poset.
    pub fn grad_kernel_module(&self, l: &LineMap) -> Self {
        let bases: Vec<Matrix<F>> = self.maps.iter().map(|m| m.kernel_basis()).collect();
        let dims = bases.iter().map(|b| b.cols()).collect();
        let maps = l
            .line
            .covers()
            .iter()
            .map(|&(e, f)| bases[f].solve(&self.maps[e].mul(&bases[e])).expect("image of a kernel vector is zero"))
            .collect();
        PosetModule::new_unchecked(l.line.clone(), dims, maps)
    }

    /// Object-wise cokernels of the cover maps, as a module over the line poset.
    pub fn grad_cokernel_module(&self, l: &LineMap) -> Self {
        let projs: Vec<Matrix<F>> = self.maps.iter().map(|m| m.cokernel_projection()).collect();
        let dims = projs.iter().map(|q| q.rows()).collect();
        let maps = l
            .line
            .covers()
            .iter()
            .map(|&(e, f)| {
                let r = projs[e].right_inverse().expect("projection has full row rank");
                projs[f].mul(&self.maps[f]).mul(&r)
            })
            .collect();
        PosetModule::new_unchecked(l.line.clone(), dims, maps)
    }

    /// Object-wise images of the cover maps with the maps induced by φ*M.
    pub fn grad_image_module(&self, l: &LineMap) -> Self {
        let bases: Vec<Matrix<F>> = self.maps.iter().map(|m| m.column_space_basis()).collect();
        let dims = bases.iter().map(|b| b.cols()).collect();
        let maps = l
            .line
            .covers()
            .iter()
            .map(|&(e, f)| bases[f].solve(&self.maps[f].mul(&bases[e])).expect("composite lands in the image"))
            .collect();
        PosetModule::new_unchecked(l.line.clone(), dims, maps)
    }
}

pub fn direct_sum_all<F: Scalar>(poset: &Arc<Poset>, ms: &[&PosetModule<F>]) -> Result<PosetModule<F>> {
    if ms.iter().any(|m| !same_poset(&m.poset, poset)) {
        return Err(Error::PosetMismatch);
    }
    let dims = (0..poset.len()).map(|x| ms.iter().map(|m| m.dims[x]).sum()).collect();
    let maps = (0..poset.num_covers())
        .map(|k| Matrix::block_diag(&ms.iter().map(|m| &m.maps[k]).collect::<Vec<_>>()))
        .collect();
    Ok(PosetModule::new_unchecked(poset.clone(), dims, maps))
}

fn indicator_module<F: Scalar>(poset: &Arc<Poset>, support: impl Fn(usize) -> bool) -> PosetModule<F> {
    let dims: Vec<usize> = (0..poset.len()).map(|x| usize::from(support(x))).collect();
    let maps = poset.covers().iter().map(|&(u, v)| {
        if dims[u] == 1 && dims[v] == 1 {
            Matrix::identity(1)
        } else {
            Matrix::zeros(dims[v], dims[u])
        }
    });
    PosetModule::new_unchecked(poset.clone(), dims.clone(), maps.collect())
}

/// F_v: k on the up-set of v.
pub fn projective_at<F: Scalar>(poset: &Arc<Poset>, v: usize) -> PosetModule<F> {
    indicator_module(poset, |x| poset.leq(v, x))
}

/// G_v: k on the down-set of v.
pub fn injective_at<F: Scalar>(poset: &Arc<Poset>, v: usize) -> PosetModule<F> {
    indicator_module(poset, |x| poset.leq(x, v))
}

/// S_v: k at v only.
pub fn simple_at<F: Scalar>(poset: &Arc<Poset>, v: usize) -> PosetModule<F> {
    indicator_module(poset, |x| x == v)
}

/// k^d everywhere with identity maps.
pub fn constant<F: Scalar>(poset: &Arc<Poset>, d: usize) -> PosetModule<F> {
    let maps = poset.covers().iter().map(|_| Matrix::identity(d)).collect();
    PosetModule::new_unchecked(poset.clone(), vec![d; poset.len()], maps)
}

/// k^d everywhere with zero maps.
pub fn constant_zero_maps<F: Scalar>(poset: &Arc<Poset>, d: usize) -> PosetModule<F> {
    let maps = poset.covers().iter().map(|_| Matrix::zeros(d, d)).collect();
    PosetModule::new_unchecked(poset.clone(), vec![d; poset.len()], maps)
}

/// A natural transformation, one matrix per object.
#[derive(Clone, PartialEq, Debug)]
pub struct ModuleMap<F: Scalar> {
    pub components: Vec<Matrix<F>>,
}

impl<F: Scalar> ModuleMap<F> {
    pub fn identity(m: &PosetModule<F>) -> Self {
        ModuleMap { components: m.dims.iter().map(|&d| Matrix::identity(d)).collect() }
    }

    pub fn zero(src: &PosetModule<F>, tgt: &PosetModule<F>) -> Self {
        ModuleMap { components: src.dims.iter().zip(&tgt.dims).map(|(&a, &b)| Matrix::zeros(b, a)).collect() }
    }

    /// Shapes fit and T(v)·M(u⋖v) = N(u⋖v)·T(u) on every cover.
    pub fn is_natural(&self, src: &PosetModule<F>, tgt: &PosetModule<F>) -> bool {
        let p = &src.poset;
        if self.components.len() != p.len()
            || (0..p.len()).any(|x| self.components[x].shape() != (tgt.dims[x], src.dims[x]))
        {
            return false;
        }
        p.covers().iter().enumerate().all(|(k, &(u, v))| {
            self.components[v].mul(&src.maps[k]) == tgt.maps[k].mul(&self.components[u])
        })
    }

    /// Natural and invertible at every object.
    pub fn is_isomorphism(&self, src: &PosetModule<F>, tgt: &PosetModule<F>) -> bool {
        self.is_natural(src, tgt) && self.components.iter().all(|c| c.is_invertible())
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &Self) -> Self {
        ModuleMap { components: self.components.iter().zip(&first.components).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn block_diag(parts: &[&Self]) -> Self {
        let n = parts.first().map_or(0, |p| p.components.len());
        ModuleMap {
            components: (0..n)
                .map(|x| Matrix::block_diag(&parts.iter().map(|p| &p.components[x]).collect::<Vec<_>>()))
                .collect(),
        }
    }

    /// Image module of a natural transformation, with its inclusion into the target.
    pub fn image(&self, tgt: &PosetModule<F>) -> (PosetModule<F>, ModuleMap<F>) {
        let bases: Vec<Matrix<F>> = self.components.iter().map(|c| c.column_space_basis()).collect();
        sub_module(tgt, bases)
    }

    /// Kernel module of a natural transformation, with its inclusion into the source.
    pub fn kernel(&self, src: &PosetModule<F>) -> (PosetModule<F>, ModuleMap<F>) {
        let bases: Vec<Matrix<F>> = self.components.iter().map(|c| c.kernel_basis()).collect();
        sub_module(src, bases)
    }

    /// Cokernel module with its projection from the target.
    pub fn cokernel(&self, tgt: &PosetModule<F>) -> (PosetModule<F>, ModuleMap<F>) {
        let projs: Vec<Matrix<F>> = self.components.iter().map(|c| c.cokernel_projection()).collect();
        let p = tgt.poset.clone();
        let dims = projs.iter().map(|q| q.rows()).collect();
        let maps = p
            .covers()
            .iter()
            .enumerate()
            .map(|(k, &(u, v))| {
                let r = projs[u].right_inverse().expect("projection has full row rank");
                projs[v].mul(&tgt.maps[k]).mul(&r)
            })
            .collect();
        (PosetModule::new_unchecked(p, dims, maps), ModuleMap { components: projs })
    }
}

/// The submodule spanned at each object by the columns of `bases` (which must be stable under the maps).
pub fn sub_module<F: Scalar>(m: &PosetModule<F>, bases: Vec<Matrix<F>>) -> (PosetModule<F>, ModuleMap<F>) {
    let p = m.poset.clone();
    let dims = bases.iter().map(|b| b.cols()).collect();
    let maps = p
        .covers()
        .iter()
        .enumerate()
        .map(|(k, &(u, v))| bases[v].solve(&m.maps[k].mul(&bases[u])).expect("subspaces are stable"))
        .collect();
    (PosetModule::new_unchecked(p, dims, maps), ModuleMap { components: bases })
}

/// Colimit of a module over a full sub-poset, presented as a quotient of the direct sum.
#[derive(Clone, Debug)]
pub struct Colimit<F: Scalar> {
    pub dim: usize,
    pub objs: Vec<usize>,
    pub offsets: Vec<usize>,
    pub total: usize,
    /// dim × total, kills every relation
    pub proj: Matrix<F>,
}

impl<F: Scalar> Colimit<F> {
    /// Leg from the i-th object of `objs`.
    pub fn leg(&self, i: usize, d: usize) -> Matrix<F> {
        self.proj.block(0, self.offsets[i], self.dim, d)
    }
}

/// Limit of a module over a full sub-poset, presented as a subspace of the product.
#[derive(Clone, Debug)]
pub struct Limit<F: Scalar> {
    pub dim: usize,
    pub objs: Vec<usize>,
    pub offsets: Vec<usize>,
    pub total: usize,
    /// total × dim, columns span the compatible families
    pub basis: Matrix<F>,
}

impl<F: Scalar> Limit<F> {
    pub fn leg(&self, i: usize, d: usize) -> Matrix<F> {
        self.basis.block(self.offsets[i], 0, d, self.dim)
    }
}

fn offsets<F: Scalar>(m: &PosetModule<F>, objs: &[usize]) -> (Vec<usize>, usize) {
    let mut off = Vec::with_capacity(objs.len());
    let mut t = 0;
    for &o in objs {
        off.push(t);
        t += m.dims[o];
    }
    (off, t)
}

/// Colimit over the full sub-poset on `objs`.
pub fn colimit_over<F: Scalar>(m: &PosetModule<F>, objs: &[usize]) -> Colimit<F> {
    let (off, total) = offsets(m, objs);
    let sub = m.poset.full_subposet(objs);
    let ncols: usize = sub.covers().iter().map(|&(a, _)| m.dims[objs[a]]).sum();
    let mut phi = Matrix::zeros(total, ncols);
    let mut c = 0;
    for &(a, b) in sub.covers() {
        let (x, y) = (objs[a], objs[b]);
        let da = m.dims[x];
        phi.set_block(off[b], c, &m.eval(x, y).expect("x ≤ y"));
        phi.set_block(off[a], c, &Matrix::identity(da).neg());
        c += da;
    }
    let proj = phi.cokernel_projection();
    Colimit { dim: proj.rows(), objs: objs.to_vec(), offsets: off, total, proj }
}

/// Limit over the full sub-poset on `objs`.
pub fn limit_over<F: Scalar>(m: &PosetModule<F>, objs: &[usize]) -> Limit<F> {
    let (off, total) = offsets(m, objs);
    let sub = m.poset.full_subposet(objs);
    let nrows: usize = sub.covers().iter().map(|&(_, b)| m.dims[objs[b]]).sum();
    let mut cons = Matrix::zeros(nrows, total);
    let mut r = 0;
    for &(a, b) in sub.covers() {
        let (x, y) = (objs[a], objs[b]);
        let db = m.dims[y];
        cons.set_block(r, off[a], &m.eval(x, y).expect("x ≤ y"));
        cons.set_block(r, off[b], &Matrix::identity(db).neg());
        r += db;
    }
    let basis = cons.kernel_basis();
    Limit { dim: basis.cols(), objs: objs.to_vec(), offsets: off, total, basis }
}

pub fn colimit<F: Scalar>(m: &PosetModule<F>) -> Colimit<F> {
    colimit_over(m, &(0..m.poset.len()).collect::<Vec<_>>())
}

pub fn limit<F: Scalar>(m: &PosetModule<F>) -> Limit<F> {
    limit_over(m, &(0..m.poset.len()).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::line::line_poset;

    fn q(r: usize, c: usize, v: &[i64]) -> Matrix<Q> {
        Matrix::from_i64(r, c, v)
    }

    fn diamond() -> Arc<Poset> {
        Arc::new(
            Poset::from_covers(&["bot", "a", "b", "top"], &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])
                .unwrap(),
        )
    }

    #[test]
    fn validation() {
        let d = diamond();
        assert!(constant::<Q>(&d, 2).validate().is_ok());
        let bad = PosetModule::<Q>::from_labeled(
            d.clone(),
            &[("bot", 1), ("a", 1), ("b", 1), ("top", 1)],
            &[
                (("bot", "a"), q(1, 1, &[1])),
                (("bot", "b"), q(1, 1, &[1])),
                (("a", "top"), q(1, 1, &[1])),
                (("b", "top"), q(1, 1, &[2])),
            ],
        )
        .unwrap_err();
        match bad {
            Error::PathDisagreement { from, to, .. } => assert_eq!((from.as_str(), to.as_str()), ("bot", "top")),
            e => panic!("{e:?}"),
        }
        let shape = PosetModule::<Q>::new(Arc::new(Poset::chain(2)), vec![1, 2], vec![q(1, 1, &[1])]).unwrap_err();
        assert!(matches!(shape, Error::Shape(_)));
    }

    #[test]
    fn eval_composes() {
        let c = Arc::new(Poset::chain(3));
        let m = PosetModule::new(c, vec![1, 1, 1], vec![q(1, 1, &[2]), q(1, 1, &[3])]).unwrap();
        assert_eq!(m.eval(0, 2).unwrap(), q(1, 1, &[6]));
        assert!(m.eval(1, 1).unwrap().is_identity());
        assert!(m.eval(2, 0).is_err());
    }

    #[test]
    fn sums_and_tensors() {
        let c = Arc::new(Poset::chain(2));
        let a = PosetModule::new(c.clone(), vec![1, 1], vec![q(1, 1, &[2])]).unwrap();
        let b = PosetModule::new(c.clone(), vec![1, 1], vec![q(1, 1, &[3])]).unwrap();
        assert_eq!(a.tensor(&b).unwrap().map(0), &q(1, 1, &[6]));
        let s = a.direct_sum(&PosetModule::zero(&c)).unwrap();
        assert_eq!(s, a);
        assert_eq!(a.direct_sum(&b).unwrap().dims(), &[2, 2]);
    }

    #[test]
    fn pullbacks_on_chain() {
        let c = Arc::new(Poset::chain(3));
        let m = PosetModule::new(c.clone(), vec![1, 2, 3], vec![q(2, 1, &[1, 0]), q(3, 2, &[1, 0, 0, 1, 0, 0])])
            .unwrap();
        let l = line_poset(&c);
        let phi = m.front_pullback(&l);
        let beta = m.back_pullback(&l);
        assert_eq!(phi.dims(), &[2, 3]);
        assert_eq!(phi.map(0), m.map(1));
        assert_eq!(beta.dims(), &[1, 2]);
        assert_eq!(beta.map(0), m.map(0));
    }

    #[test]
    fn distinguished_modules() {
        let c = Arc::new(Poset::chain(3));
        let f1 = projective_at::<Q>(&c, 1);
        assert_eq!(f1.dims(), &[0, 1, 1]);
        assert!(f1.map(1).is_identity());
        let g1 = injective_at::<Q>(&c, 1);
        assert_eq!(g1.dims(), &[1, 1, 0]);
        assert!(g1.map(0).is_identity());
        let s1 = simple_at::<Q>(&c, 1);
        assert_eq!(s1.dims(), &[0, 1, 0]);
        assert!(constant::<Q>(&c, 1).is_locally_constant());
        assert!(constant_zero_maps::<Q>(&c, 1).is_virtually_trivial());
    }

    #[test]
    fn kernel_cokernel_image() {
        let c = Arc::new(Poset::chain(2));
        let l = line_poset(&c);
        let z = constant_zero_maps::<Q>(&c, 1);
        assert_eq!(z.grad_kernel_module(&l).dims(), &[1]);
        assert_eq!(z.grad_cokernel_module(&l).dims(), &[1]);
        let inj = PosetModule::new(c.clone(), vec![1, 2], vec![q(2, 1, &[1, 0])]).unwrap();
        assert_eq!(inj.grad_kernel_module(&l).dims(), &[0]);
        assert_eq!(inj.grad_cokernel_module(&l).dims(), &[1]);
        assert_eq!(inj.grad_image_module(&l).dims(), &[1]);
        let k = constant::<Q>(&c, 3);
        assert_eq!(k.grad_kernel_module(&l).dims(), &[0]);
        assert_eq!(k.grad_cokernel_module(&l).dims(), &[0]);
    }

    #[test]
    fn kernel_and_cokernel_are_virtually_trivial() {
        let c = Arc::new(Poset::chain(4));
        let l = line_poset(&c);
        let m = PosetModule::new(
            c,
            vec![2, 2, 2, 1],
            vec![q(2, 2, &[1, 0, 0, 0]), q(2, 2, &[0, 1, 1, 0]), q(1, 2, &[1, 1])],
        )
        .unwrap();
        assert!(m.grad_kernel_module(&l).is_virtually_trivial());
        assert!(m.grad_cokernel_module(&l).is_virtually_trivial());
        assert!(m.grad_image_module(&l).validate().is_ok());
    }

    #[test]
    fn colimits_and_limits() {
        let one = Arc::new(Poset::from_covers::<_, &str>(&["x"], &[]).unwrap());
        let m = constant::<Q>(&one, 3);
        assert_eq!(colimit(&m).dim, 3);
        assert_eq!(limit(&m).dim, 3);
        let c = Arc::new(Poset::chain(2));
        assert_eq!(colimit(&constant_zero_maps::<Q>(&c, 1)).dim, 1);
        let star = Arc::new(Poset::from_covers(&["r", "a", "b"], &[("r", "a"), ("r", "b")]).unwrap());
        assert_eq!(limit(&constant::<Q>(&star, 1)).dim, 1);
        assert_eq!(colimit(&constant::<Q>(&star, 1)).dim, 1);
        // two disjoint points
        let anti = Arc::new(Poset::from_covers::<_, &str>(&["a", "b"], &[]).unwrap());
        assert_eq!(colimit(&constant::<Q>(&anti, 1)).dim, 2);
    }

    #[test]
    fn concurrent_eval() {
        let c = Arc::new(Poset::chain(5));
        let m = Arc::new(PosetModule::<Q>::from_fn(c, vec![1; 5], |k, _, _| q(1, 1, &[k as i64 + 1])).unwrap());
        let hs: Vec<_> = (0..4)
            .map(|_| {
                let m = m.clone();
                std::thread::spawn(move || m.eval(0, 4).unwrap())
            })
            .collect();
        for h in hs {
            assert_eq!(h.join().unwrap(), q(1, 1, &[24]));
        }
    }
}
