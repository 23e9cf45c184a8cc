//! Vanishing gradients on line connected trees and the transport systems that describe them.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::grothendieck::{iso_check, IsoOptions, Verdict};
use crate::line::{LineMap, TreeSubgraph};
use crate::matrix::Matrix;
use crate::module::PosetModule;
use crate::poset::Poset;

/// Isomorphisms α_{u,v}: M(u) → M(v) for every ordered pair, plus the endomorphism γ₀ at x₀.
#[derive(Clone, Debug, PartialEq)]
pub struct TransportSystem<F: Scalar> {
    pub x0: usize,
    pub x1: usize,
    pub alpha: BTreeMap<(usize, usize), Matrix<F>>,
    pub gamma0: Matrix<F>,
}

impl<F: Scalar> TransportSystem<F> {
    pub fn alpha(&self, u: usize, v: usize) -> &Matrix<F> {
        &self.alpha[&(u, v)]
    }

    /// α from the family α_{x₀,v}, one invertible matrix per object.
    pub fn from_base(x0: usize, x1: usize, from_x0: &[Matrix<F>], gamma0: Matrix<F>) -> Result<Self> {
        let inv: Vec<Matrix<F>> = from_x0
            .iter()
            .map(|a| a.inverse().ok_or_else(|| Error::Hypothesis("transport map is not invertible".into())))
            .collect::<Result<_>>()?;
        let mut alpha = BTreeMap::new();
        for u in 0..from_x0.len() {
            for v in 0..from_x0.len() {
                alpha.insert((u, v), from_x0[v].mul(&inv[u]));
            }
        }
        Ok(TransportSystem { x0, x1, alpha, gamma0 })
    }
}

/// Kernels and images in the sense of a vanishing gradient, object by object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KerImReport {
    pub ker_dims: Vec<(String, usize)>,
    pub im_dims: Vec<(String, usize)>,
    /// Kernels of all covers out of an object agree, and so do images of all covers into it.
    pub well_defined: bool,
    /// Ker has one dimension on non-maximal objects, Im one dimension everywhere.
    pub ker_constant: bool,
    pub im_constant: bool,
}

#[derive(Clone, Debug)]
pub struct TransportCertificate<F: Scalar> {
    /// The sub-poset generated by the tree; indices in `system` refer to it.
    pub poset: Arc<Poset>,
    /// Object embedding into the original poset.
    pub objects: Vec<usize>,
    pub system: TransportSystem<F>,
    pub transitive: bool,
    pub compatible: bool,
    pub factorization: bool,
    pub ker_im: KerImReport,
}

impl<F: Scalar> TransportCertificate<F> {
    pub fn all_checks_pass(&self) -> bool {
        self.transitive && self.compatible && self.factorization && self.ker_im.well_defined
    }
}

#[derive(Clone, Debug)]
pub enum VanishingVerdict<F: Scalar> {
    Certified(Box<TransportCertificate<F>>),
    /// A certified invariant difference between β*M and φ*M on the tree.
    Refuted(Verdict<F>),
    Unknown { failure_bound: String },
}

impl<F: Scalar> VanishingVerdict<F> {
    pub fn certificate(&self) -> Option<&TransportCertificate<F>> {
        match self {
            VanishingVerdict::Certified(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, VanishingVerdict::Refuted(_))
    }
}

/// Least non-maximal object by label, and its least cover-successor by label.
fn base_pair(p: &Poset) -> Option<(usize, usize)> {
    let x0 = (0..p.len()).filter(|&x| !p.succ(x).is_empty()).min_by(|&a, &b| p.label(a).cmp(p.label(b)))?;
    let x1 = *p.succ(x0).iter().min_by(|&&a, &&b| p.label(a).cmp(p.label(b)))?;
    Some((x0, x1))
}

fn same_subspace<F: Scalar>(a: &Matrix<F>, b: &Matrix<F>) -> bool {
    let r = a.rank();
    r == b.rank() && Matrix::hstack(&[a, b]).rank() == r
}

fn ker_im_report<F: Scalar>(m: &PosetModule<F>) -> KerImReport {
    let p = m.poset();
    let mut well = true;
    let mut ker = Vec::new();
    let mut im = Vec::new();
    for u in 0..p.len() {
        let ks: Vec<Matrix<F>> = p.out_covers(u).iter().map(|&k| m.map(k).kernel_basis()).collect();
        well &= ks.windows(2).all(|w| same_subspace(&w[0], &w[1]));
        ker.push(ks.first().map_or(0, |k| k.cols()));
    }
    for u in 0..p.len() {
        let is: Vec<Matrix<F>> = p.in_covers(u).iter().map(|&k| m.map(k).column_space_basis()).collect();
        well &= is.windows(2).all(|w| same_subspace(&w[0], &w[1]));
        im.push(match is.first() {
            Some(b) => b.cols(),
            None => m.dim(u) - ker[u],
        });
    }
    let non_max: Vec<usize> = (0..p.len()).filter(|&u| !p.succ(u).is_empty()).map(|u| ker[u]).collect();
    let label = |v: Vec<usize>| v.into_iter().enumerate().map(|(i, d)| (p.label(i).to_string(), d)).collect();
    KerImReport {
        ker_constant: non_max.windows(2).all(|w| w[0] == w[1]),
        im_constant: im.windows(2).all(|w| w[0] == w[1]),
        ker_dims: label(ker),
        im_dims: label(im),
        well_defined: well,
    }
}

/// Decides whether ∇[M_T] = 0 on a line connected tree T and, if so, recovers the transport system.
pub fn vanishing_on_tree<F: Scalar>(
    m: &PosetModule<F>,
    t: &TreeSubgraph,
    opts: &IsoOptions,
) -> Result<VanishingVerdict<F>> {
    if !t.is_line_connected() {
        return Err(Error::Hypothesis("tree is not line connected".into()));
    }
    let (sub, objs) = t.poset();
    let mt = m.restrict(&sub, &objs)?;
    let line = LineMap::new(&sub);
    let witness = match iso_check(&mt.back_pullback(&line), &mt.front_pullback(&line), opts)? {
        Verdict::Isomorphic { witness } => witness,
        Verdict::NoIsoFound { failure_bound } => return Ok(VanishingVerdict::Unknown { failure_bound }),
        v => return Ok(VanishingVerdict::Refuted(v)),
    };
    let n = sub.len();
    let Some((x0, x1)) = base_pair(&sub) else {
        // a single object: nothing to transport
        let system = TransportSystem::from_base(0, 0, &[Matrix::identity(mt.dim(0))], Matrix::identity(mt.dim(0)))?;
        let ker_im = ker_im_report(&mt);
        return Ok(VanishingVerdict::Certified(Box::new(TransportCertificate {
            poset: sub,
            objects: objs,
            system,
            transitive: true,
            compatible: true,
            factorization: true,
            ker_im,
        })));
    };

    // α_{x₀,v} by a walk over the undirected tree
    let mut from_x0: Vec<Option<Matrix<F>>> = vec![None; n];
    from_x0[x0] = Some(Matrix::identity(mt.dim(x0)));
    let mut queue = VecDeque::from([x0]);
    while let Some(a) = queue.pop_front() {
        let fa = from_x0[a].clone().expect("visited");
        for &k in sub.out_covers(a) {
            let b = sub.cover(k).1;
            if from_x0[b].is_none() {
                from_x0[b] = Some(witness.components[k].mul(&fa));
                queue.push_back(b);
            }
        }
        for &k in sub.in_covers(a) {
            let b = sub.cover(k).0;
            if from_x0[b].is_none() {
                let inv = witness.components[k].inverse().expect("witness is invertible");
                from_x0[b] = Some(inv.mul(&fa));
                queue.push_back(b);
            }
        }
    }
    let from_x0: Vec<Matrix<F>> = from_x0.into_iter().map(|a| a.expect("tree is connected")).collect();
    let provisional = TransportSystem::from_base(x0, x1, &from_x0, Matrix::identity(0))?;
    let k01 = sub.cover_id(x0, x1).expect("x₁ covers x₀");
    let gamma0 = provisional.alpha(x1, x0).mul(mt.map(k01));
    let system = TransportSystem { gamma0, ..provisional };

    // (1): α agrees with the witness on covers and composes
    let mut transitive = sub.covers().iter().enumerate().all(|(k, &(u, v))| *system.alpha(u, v) == witness.components[k]);
    for u in 0..n {
        transitive &= system.alpha(u, u).is_identity();
        for v in 0..n {
            for w in 0..n {
                transitive &= system.alpha(v, w).mul(system.alpha(u, v)) == *system.alpha(u, w);
            }
        }
    }
    // (2): α_{w,t}·M(u⋖w) = M(s⋖t)·α_{u,s} for every pair of covers
    let mut compatible = true;
    for (k, &(u, w)) in sub.covers().iter().enumerate() {
        for (j, &(s, tt)) in sub.covers().iter().enumerate() {
            compatible &= system.alpha(w, tt).mul(mt.map(k)) == mt.map(j).mul(system.alpha(u, s));
        }
    }
    // M(y<y') = α_{x₀,y'}·γ₀^k·α_{y,x₀} with k the length of the path
    let mut factorization = true;
    for (y, y2) in sub.relations() {
        let len = sub.path(y, y2).expect("y ≤ y'").len() - 1;
        let rhs = system.alpha(x0, y2).mul(&system.gamma0.pow(len)).mul(system.alpha(y, x0));
        factorization &= mt.eval(y, y2)? == rhs;
    }
    let ker_im = ker_im_report(&mt);
    Ok(VanishingVerdict::Certified(Box::new(TransportCertificate {
        poset: sub,
        objects: objs,
        system,
        transitive,
        compatible,
        factorization,
        ker_im,
    })))
}

/// M(u⋖w) = α_{x₀,w}·γ₀·α_{u,x₀} on a tree poset.
pub fn module_from_transport<F: Scalar>(poset: &Arc<Poset>, ts: &TransportSystem<F>) -> Result<PosetModule<F>> {
    if !poset.is_tree() {
        return Err(Error::Hypothesis("the Hasse diagram is not a tree".into()));
    }
    let x0 = ts.x0;
    let dims: Vec<usize> = (0..poset.len()).map(|v| ts.alpha(x0, v).rows()).collect();
    PosetModule::from_fn(poset.clone(), dims, |_, u, w| ts.alpha(x0, w).mul(&ts.gamma0).mul(ts.alpha(u, x0)))
}

pub(crate) fn random_invertible<F: Scalar>(rng: &mut impl Rng, d: usize) -> Matrix<F> {
    loop {
        let vals: Vec<i64> = (0..d * d).map(|_| rng.gen_range(-3..=3)).collect();
        let m = Matrix::from_i64(d, d, &vals);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A d×d matrix of the given rank.
pub(crate) fn random_of_rank<F: Scalar>(rng: &mut impl Rng, d: usize, r: usize) -> Matrix<F> {
    assert!(r <= d);
    loop {
        let a: Vec<i64> = (0..d * r).map(|_| rng.gen_range(-3..=3)).collect();
        let b: Vec<i64> = (0..r * d).map(|_| rng.gen_range(-3..=3)).collect();
        let m = Matrix::<F>::from_i64(d, r, &a).mul(&Matrix::from_i64(r, d, &b));
        if m.rank() == r {
            return m;
        }
    }
}

/// A module with vanishing gradient on a tree poset, built from a random transport system of
/// dimension `d` whose γ₀ has rank `r`.
pub fn random_transport_module<F: Scalar>(
    poset: &Arc<Poset>,
    d: usize,
    r: usize,
    rng: &mut impl Rng,
) -> Result<(PosetModule<F>, TransportSystem<F>)> {
    let (x0, x1) = base_pair(poset).ok_or_else(|| Error::Hypothesis("poset has no covers".into()))?;
    let from_x0: Vec<Matrix<F>> =
        (0..poset.len()).map(|v| if v == x0 { Matrix::identity(d) } else { random_invertible(rng, d) }).collect();
    let ts = TransportSystem::from_base(x0, x1, &from_x0, random_of_rank(rng, d, r))?;
    Ok((module_from_transport(poset, &ts)?, ts))
}
