//! Virtual modules, their invariants, and randomized isomorphism testing.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::hom::HomSpace;
use crate::line::LineMap;
use crate::matrix::Matrix;
use crate::module::{direct_sum_all, same_poset, ModuleMap, PosetModule};
use crate::poset::Poset;

/// A formal difference of direct sums, kept as lists of summands.
#[derive(Clone, Debug)]
pub struct VirtualModule<F: Scalar> {
    poset: Arc<Poset>,
    pub plus: Vec<PosetModule<F>>,
    pub minus: Vec<PosetModule<F>>,
}

impl<F: Scalar> VirtualModule<F> {
    pub fn new(poset: &Arc<Poset>, plus: Vec<PosetModule<F>>, minus: Vec<PosetModule<F>>) -> Result<Self> {
        if plus.iter().chain(&minus).any(|m| !same_poset(m.poset(), poset)) {
            return Err(Error::PosetMismatch);
        }
        let keep = |v: Vec<PosetModule<F>>| v.into_iter().filter(|m| !m.is_zero()).collect();
        Ok(VirtualModule { poset: poset.clone(), plus: keep(plus), minus: keep(minus) })
    }

    pub fn zero(poset: &Arc<Poset>) -> Self {
        VirtualModule { poset: poset.clone(), plus: vec![], minus: vec![] }
    }

    /// [M]
    pub fn from_module(m: &PosetModule<F>) -> Self {
        VirtualModule::new(m.poset(), vec![m.clone()], vec![]).expect("one poset")
    }

    /// [M] − [N]
    pub fn difference(m: &PosetModule<F>, n: &PosetModule<F>) -> Result<Self> {
        VirtualModule::new(m.poset(), vec![m.clone()], vec![n.clone()])
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn is_formally_zero(&self) -> bool {
        self.plus.is_empty() && self.minus.is_empty()
    }

    pub fn plus_sum(&self) -> PosetModule<F> {
        direct_sum_all(&self.poset, &self.plus.iter().collect::<Vec<_>>()).expect("one poset")
    }

    pub fn minus_sum(&self) -> PosetModule<F> {
        direct_sum_all(&self.poset, &self.minus.iter().collect::<Vec<_>>()).expect("one poset")
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        if !same_poset(&self.poset, &o.poset) {
            return Err(Error::PosetMismatch);
        }
        let cat = |a: &[PosetModule<F>], b: &[PosetModule<F>]| a.iter().chain(b).cloned().collect();
        VirtualModule::new(&self.poset, cat(&self.plus, &o.plus), cat(&self.minus, &o.minus))
    }

    /// Product induced by the object-wise tensor product.
    pub fn tensor(&self, o: &Self) -> Result<Self> {
        if !same_poset(&self.poset, &o.poset) {
            return Err(Error::PosetMismatch);
        }
        let prod = |a: &[PosetModule<F>], b: &[PosetModule<F>]| -> Result<Vec<PosetModule<F>>> {
            let mut v = Vec::new();
            for x in a {
                for y in b {
                    v.push(x.tensor(y)?);
                }
            }
            Ok(v)
        };
        let mut plus = prod(&self.plus, &o.plus)?;
        plus.extend(prod(&self.minus, &o.minus)?);
        let mut minus = prod(&self.plus, &o.minus)?;
        minus.extend(prod(&self.minus, &o.plus)?);
        VirtualModule::new(&self.poset, plus, minus)
    }

    /// Restriction of every summand along a monotone object map.
    pub fn restrict(&self, q: &Arc<Poset>, f: &[usize]) -> Result<Self> {
        let r = |v: &[PosetModule<F>]| v.iter().map(|m| m.restrict(q, f)).collect::<Result<Vec<_>>>();
        VirtualModule::new(q, r(&self.plus)?, r(&self.minus)?)
    }

    pub fn front_pullback(&self, l: &LineMap) -> Self {
        self.restrict(&l.line, &l.front).expect("front map is monotone")
    }

    pub fn back_pullback(&self, l: &LineMap) -> Self {
        self.restrict(&l.line, &l.back).expect("back map is monotone")
    }
}

impl<F: Scalar> Neg for VirtualModule<F> {
    type Output = Self;
    fn neg(self) -> Self {
        VirtualModule { poset: self.poset, plus: self.minus, minus: self.plus }
    }
}

impl<F: Scalar> Add for VirtualModule<F> {
    type Output = Self;
    /// Panics on a poset mismatch; see [`VirtualModule::try_add`].
    fn add(self, o: Self) -> Self {
        self.try_add(&o).expect("virtual modules on one poset")
    }
}

impl<F: Scalar> Sub for VirtualModule<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

/// Object-wise integer dimensions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DimVector(pub Vec<i64>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn of_module<F: Scalar>(m: &PosetModule<F>) -> Self {
        DimVector(m.dims().iter().map(|&d| d as i64).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    pub fn get(&self, x: usize) -> i64 {
        self.0[x]
    }

    pub fn labeled(&self, p: &Poset) -> Vec<(String, i64)> {
        self.0.iter().enumerate().map(|(x, &d)| (p.label(x).to_string(), d)).collect()
    }
}

impl Add for DimVector {
    type Output = DimVector;
    fn add(self, o: Self) -> Self {
        assert_eq!(self.0.len(), o.0.len());
        DimVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for DimVector {
    type Output = DimVector;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for DimVector {
    type Output = DimVector;
    fn neg(self) -> Self {
        DimVector(self.0.into_iter().map(|d| -d).collect())
    }
}

impl From<Vec<i64>> for DimVector {
    fn from(v: Vec<i64>) -> Self {
        DimVector(v)
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

pub fn dimvec<F: Scalar>(x: &VirtualModule<F>) -> DimVector {
    let n = x.poset.len();
    let p = x.plus.iter().fold(DimVector::zero(n), |a, m| a + DimVector::of_module(m));
    x.minus.iter().fold(p, |a, m| a - DimVector::of_module(m))
}

/// Multiplicities of the simples in the reduced Grothendieck group.
pub fn reduced_class<F: Scalar>(m: &PosetModule<F>) -> DimVector {
    DimVector::of_module(m)
}

/// Signed ranks on every relation x ≤ y, identities included.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankInvariant(pub BTreeMap<(usize, usize), i64>);

impl RankInvariant {
    pub fn get(&self, x: usize, y: usize) -> i64 {
        self.0.get(&(x, y)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.values().all(|&r| r == 0)
    }

    /// First relation where the two invariants differ.
    pub fn first_difference(&self, o: &Self) -> Option<((usize, usize), i64, i64)> {
        self.0
            .keys()
            .chain(o.0.keys())
            .find(|k| self.get(k.0, k.1) != o.get(k.0, k.1))
            .map(|&k| (k, self.get(k.0, k.1), o.get(k.0, k.1)))
    }
}

pub fn module_rank_invariant<F: Scalar>(m: &PosetModule<F>) -> RankInvariant {
    let p = m.poset();
    let mut r = BTreeMap::new();
    for (x, y) in p.relations() {
        r.insert((x, y), m.eval(x, y).expect("relation").rank() as i64);
    }
    RankInvariant(r)
}

fn signed_sum(p: &Poset, parts: impl Iterator<Item = (i64, RankInvariant)>) -> RankInvariant {
    let mut r: BTreeMap<(usize, usize), i64> = p.relations().into_iter().map(|k| (k, 0)).collect();
    for (s, inv) in parts {
        for (k, v) in inv.0 {
            *r.entry(k).or_insert(0) += s * v;
        }
    }
    RankInvariant(r)
}

pub fn rank_invariant<F: Scalar>(x: &VirtualModule<F>) -> RankInvariant {
    let parts = x
        .plus
        .iter()
        .map(|m| (1, module_rank_invariant(m)))
        .chain(x.minus.iter().map(|m| (-1, module_rank_invariant(m))));
    signed_sum(&x.poset, parts)
}

/// Knobs for the randomized search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoOptions {
    pub trials: usize,
    /// coefficients are drawn from [−bound, bound]
    pub bound: i64,
    pub seed: u64,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions { trials: 16, bound: 10, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<F: Scalar> {
    /// Certified by a natural transformation invertible at every object.
    Isomorphic { witness: ModuleMap<F> },
    /// Certified: dimensions differ at `object`.
    DimsDiffer { object: String, left: i64, right: i64 },
    /// Certified: ranks differ on `x ≤ y`.
    RankDiffers { x: String, y: String, left: i64, right: i64 },
    /// Certified: dim Hom(M, N) differs from dim Hom(M, M) or dim Hom(N, N).
    HomDiffers { hom_mn: usize, hom_mm: usize, hom_nn: usize },
    /// One-sided: no witness among the samples. Over ℚ an isomorphism would be missed with
    /// probability at most `failure_bound`.
    NoIsoFound { failure_bound: String },
}

impl<F: Scalar> Verdict<F> {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, Verdict::Isomorphic { .. })
    }

    /// True for the verdicts that prove non-isomorphism.
    pub fn is_certified_different(&self) -> bool {
        matches!(self, Verdict::DimsDiffer { .. } | Verdict::RankDiffers { .. } | Verdict::HomDiffers { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Isomorphic { .. } => "isomorphic",
            Verdict::DimsDiffer { .. } => "dims-differ",
            Verdict::RankDiffers { .. } => "rank-differs",
            Verdict::HomDiffers { .. } => "hom-differs",
            Verdict::NoIsoFound { .. } => "no-iso-found",
        }
    }

    pub fn witness(&self) -> Option<&ModuleMap<F>> {
        match self {
            Verdict::Isomorphic { witness } => Some(witness),
            _ => None,
        }
    }
}

/// Schwartz–Zippel: (D/|S|)^trials, capped at 1.
fn failure_bound<F: Scalar>(total_dim: usize, opts: &IsoOptions) -> String {
    let mut s = BigInt::from(2 * opts.bound + 1);
    let p = F::characteristic();
    if p != 0 && s > BigInt::from(p) {
        s = BigInt::from(p);
    }
    let d = BigInt::from(total_dim);
    let r = if d >= s {
        BigRational::one()
    } else {
        Pow::pow(BigRational::new(d, s), opts.trials as u32)
    };
    format!("{}/{}", r.numer(), r.denom())
}

fn certified_precheck<F: Scalar>(
    p: &Poset,
    dl: &DimVector,
    dr: &DimVector,
    rank: impl FnOnce() -> (RankInvariant, RankInvariant),
) -> Option<Verdict<F>> {
    if let Some(x) = (0..p.len()).find(|&x| dl.get(x) != dr.get(x)) {
        return Some(Verdict::DimsDiffer { object: p.label(x).into(), left: dl.get(x), right: dr.get(x) });
    }
    let (rl, rr) = rank();
    rl.first_difference(&rr).map(|((x, y), l, r)| Verdict::RankDiffers {
        x: p.label(x).into(),
        y: p.label(y).into(),
        left: l,
        right: r,
    })
}

fn search<F: Scalar>(m: &PosetModule<F>, n: &PosetModule<F>, opts: &IsoOptions) -> Result<Verdict<F>> {
    let h = HomSpace::new(m, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.trials.max(1) {
        let t = h.random_element(&mut rng, opts.bound);
        if t.components.iter().all(|c| c.is_invertible()) {
            return Ok(Verdict::Isomorphic { witness: t });
        }
    }
    let hom_mm = HomSpace::new(m, m)?.dim();
    let hom_nn = HomSpace::new(n, n)?.dim();
    if h.dim() != hom_mm || h.dim() != hom_nn {
        return Ok(Verdict::HomDiffers { hom_mn: h.dim(), hom_mm, hom_nn });
    }
    Ok(Verdict::NoIsoFound { failure_bound: failure_bound::<F>(m.total_dim(), opts) })
}

/// Decide M ≅ N: certified invariant differences first, then a random search for a witness.
pub fn iso_check<F: Scalar>(m: &PosetModule<F>, n: &PosetModule<F>, opts: &IsoOptions) -> Result<Verdict<F>> {
    if !same_poset(m.poset(), n.poset()) {
        return Err(Error::PosetMismatch);
    }
    let pre = certified_precheck(m.poset(), &DimVector::of_module(m), &DimVector::of_module(n), || {
        (module_rank_invariant(m), module_rank_invariant(n))
    });
    match pre {
        Some(v) => Ok(v),
        None => search(m, n, opts),
    }
}

/// Per-object offsets of each summand inside the direct sum.
fn summand_offsets<F: Scalar>(n: usize, list: &[&PosetModule<F>]) -> Vec<Vec<usize>> {
    let mut acc = vec![0; n];
    list.iter()
        .map(|m| {
            let o = acc.clone();
            for x in 0..n {
                acc[x] += m.dim(x);
            }
            o
        })
        .collect()
}

/// Equality in the Grothendieck group: [A] − [B] = [C] − [D] iff A ⊕ D ≅ C ⊕ B.
///
/// Summands equal on the nose are paired off first (Krull–Schmidt makes this sound); the witness
/// returned is always a full isomorphism between the two complete direct sums, ordered as
/// `X.plus ++ Y.minus` → `Y.plus ++ X.minus`.
pub fn virtual_equal<F: Scalar>(x: &VirtualModule<F>, y: &VirtualModule<F>, opts: &IsoOptions) -> Result<Verdict<F>> {
    if !same_poset(&x.poset, &y.poset) {
        return Err(Error::PosetMismatch);
    }
    let p = x.poset.clone();
    let n = p.len();
    let left: Vec<&PosetModule<F>> = x.plus.iter().chain(&y.minus).collect();
    let right: Vec<&PosetModule<F>> = y.plus.iter().chain(&x.minus).collect();

    let mut pair_of_left: Vec<Option<usize>> = vec![None; left.len()];
    let mut used = vec![false; right.len()];
    for (i, a) in left.iter().enumerate() {
        if let Some(j) = (0..right.len()).find(|&j| !used[j] && right[j] == *a) {
            used[j] = true;
            pair_of_left[i] = Some(j);
        }
    }
    let rest_l: Vec<usize> = (0..left.len()).filter(|&i| pair_of_left[i].is_none()).collect();
    let rest_r: Vec<usize> = (0..right.len()).filter(|&j| !used[j]).collect();
    let lm: Vec<&PosetModule<F>> = rest_l.iter().map(|&i| left[i]).collect();
    let rm: Vec<&PosetModule<F>> = rest_r.iter().map(|&j| right[j]).collect();

    let dl = lm.iter().fold(DimVector::zero(n), |a, m| a + DimVector::of_module(m));
    let dr = rm.iter().fold(DimVector::zero(n), |a, m| a + DimVector::of_module(m));
    let pre = certified_precheck(&p, &dl, &dr, || {
        (
            signed_sum(&p, lm.iter().map(|m| (1, module_rank_invariant(m)))),
            signed_sum(&p, rm.iter().map(|m| (1, module_rank_invariant(m)))),
        )
    });
    if let Some(v) = pre {
        return Ok(v);
    }
    let ls = direct_sum_all(&p, &lm)?;
    let rs = direct_sum_all(&p, &rm)?;
    let inner = search(&ls, &rs, opts)?;
    let Verdict::Isomorphic { witness: w } = inner else { return Ok(inner) };

    // assemble the full witness
    let off_l = summand_offsets(n, &left);
    let off_r = summand_offsets(n, &right);
    let inner_l = summand_offsets(n, &lm);
    let inner_r = summand_offsets(n, &rm);
    let tl: Vec<usize> = (0..n).map(|o| left.iter().map(|m| m.dim(o)).sum()).collect();
    let tr: Vec<usize> = (0..n).map(|o| right.iter().map(|m| m.dim(o)).sum()).collect();
    let mut comps: Vec<Matrix<F>> = (0..n).map(|o| Matrix::zeros(tr[o], tl[o])).collect();
    for o in 0..n {
        for (i, pj) in pair_of_left.iter().enumerate() {
            if let Some(j) = *pj {
                comps[o].set_block(off_r[j][o], off_l[i][o], &Matrix::identity(left[i].dim(o)));
            }
        }
        for (a, &i) in rest_l.iter().enumerate() {
            for (b, &j) in rest_r.iter().enumerate() {
                let blk = w.components[o].block(inner_r[b][o], inner_l[a][o], right[j].dim(o), left[i].dim(o));
                comps[o].set_block(off_r[j][o], off_l[i][o], &blk);
            }
        }
    }
    Ok(Verdict::Isomorphic { witness: ModuleMap { components: comps } })
}
