//! Hom and Euler pairings, projective resolutions and Ext.

use crate::calculus::{divergence, gradient_virtual, Side};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::grothendieck::{DimVector, VirtualModule};
use crate::hom::hom_dim;
use crate::line::LineMap;
use crate::matrix::Matrix;
use crate::module::{constant, direct_sum_all, injective_at, projective_at, same_poset, ModuleMap, PosetModule};
use crate::poset::Poset;

fn signed_pairs<'a, F: Scalar>(
    x: &'a VirtualModule<F>,
    y: &'a VirtualModule<F>,
) -> impl Iterator<Item = (i64, &'a PosetModule<F>, &'a PosetModule<F>)> {
    let xs = x.plus.iter().map(|m| (1i64, m)).chain(x.minus.iter().map(|m| (-1, m)));
    xs.flat_map(move |(s, a)| {
        y.plus.iter().map(move |b| (s, a, b)).chain(y.minus.iter().map(move |b| (-s, a, b)))
    })
}

/// ⟨X, Y⟩ extended bilinearly from dim Hom.
pub fn hom_pairing<F: Scalar>(x: &VirtualModule<F>, y: &VirtualModule<F>) -> Result<i64> {
    if !same_poset(x.poset(), y.poset()) {
        return Err(Error::PosetMismatch);
    }
    signed_pairs(x, y).map(|(s, a, b)| Ok(s * hom_dim(a, b)? as i64)).sum()
}

/// A minimal projective resolution … → P₁ → P₀ → M → 0.
#[derive(Clone, Debug)]
pub struct ProjectiveResolution<F: Scalar> {
    /// generator objects of each term: P_i = ⊕_j F_{gens[i][j]}
    pub gens: Vec<Vec<usize>>,
    pub terms: Vec<PosetModule<F>>,
    /// differentials[i]: P_{i+1} → P_i
    pub differentials: Vec<ModuleMap<F>>,
    pub augmentation: ModuleMap<F>,
}

impl<F: Scalar> ProjectiveResolution<F> {
    /// Index of the last nonzero term; 0 for the zero module.
    pub fn length(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    /// Multiplicity of F_v in each term.
    pub fn multiplicities(&self, p: &Poset) -> Vec<Vec<usize>> {
        self.gens
            .iter()
            .map(|g| (0..p.len()).map(|v| g.iter().filter(|&&w| w == v).count()).collect())
            .collect()
    }

    /// Naturality, d∘d = 0, and exactness by rank bookkeeping at every object.
    pub fn verify_exact(&self, m: &PosetModule<F>) -> bool {
        let p = m.poset();
        if self.terms.is_empty() {
            return m.is_zero();
        }
        if !self.augmentation.is_natural(&self.terms[0], m) {
            return false;
        }
        for (i, d) in self.differentials.iter().enumerate() {
            if !d.is_natural(&self.terms[i + 1], &self.terms[i]) {
                return false;
            }
        }
        for x in 0..p.len() {
            let aug = &self.augmentation.components[x];
            if aug.rank() != m.dim(x) {
                return false;
            }
            // maps into P_i, then P_{i-1}, …; ker(out of P_i) = im(into P_i)
            let mut outgoing = aug.clone();
            for i in 0..self.terms.len() {
                let incoming = self.differentials.get(i).map(|d| d.components[x].clone());
                let in_rank = incoming.as_ref().map_or(0, |d| d.rank());
                if let Some(d) = &incoming {
                    if !outgoing.mul(d).is_zero() {
                        return false;
                    }
                }
                if self.terms[i].dim(x) - outgoing.rank() != in_rank {
                    return false;
                }
                if let Some(d) = incoming {
                    outgoing = d;
                }
            }
        }
        true
    }
}

/// Generators of a minimal cover: per object, basis vectors completing the image of the incoming covers.
fn top_generators<F: Scalar>(m: &PosetModule<F>) -> Vec<(usize, usize)> {
    let p = m.poset();
    let mut out = Vec::new();
    for x in 0..p.len() {
        let d = m.dim(x);
        if d == 0 {
            continue;
        }
        let ins: Vec<&Matrix<F>> = p.in_covers(x).iter().map(|&k| m.map(k)).collect();
        let img = if ins.is_empty() { Matrix::zeros(d, 0) } else { Matrix::hstack(&ins).column_space_basis() };
        let r = img.cols();
        let aug = Matrix::hstack(&[&img, &Matrix::identity(d)]);
        for &c in &aug.rref().pivots {
            if c >= r {
                out.push((x, c - r));
            }
        }
    }
    out
}

/// The map ⊕_j F_{v_j} → M sending generator j to the given vector in M(v_j).
fn cover_map<F: Scalar>(m: &PosetModule<F>, gens: &[(usize, usize)]) -> ModuleMap<F> {
    let p = m.poset();
    let components = (0..p.len())
        .map(|y| {
            let cols: Vec<Vec<F>> = gens
                .iter()
                .filter(|&&(v, _)| p.leq(v, y))
                .map(|&(v, i)| m.eval(v, y).expect("v ≤ y").column(i))
                .collect();
            let mut c = Matrix::zeros(m.dim(y), cols.len());
            for (j, col) in cols.into_iter().enumerate() {
                for (i, e) in col.into_iter().enumerate() {
                    c[(i, j)] = e;
                }
            }
            c
        })
        .collect();
    ModuleMap { components }
}

pub fn projective_resolution<F: Scalar>(m: &PosetModule<F>) -> ProjectiveResolution<F> {
    let p = m.poset().clone();
    let mut gens = Vec::new();
    let mut terms: Vec<PosetModule<F>> = Vec::new();
    let mut differentials = Vec::new();
    let mut augmentation = ModuleMap::zero(&PosetModule::zero(&p), m);
    let mut current = m.clone();
    let mut inclusion: Option<ModuleMap<F>> = None;
    let bound = p.height() + 2;
    while !current.is_zero() {
        assert!(terms.len() <= bound, "resolution exceeds the chain-length bound");
        let g = top_generators(&current);
        let objs: Vec<usize> = g.iter().map(|&(v, _)| v).collect();
        let summands: Vec<PosetModule<F>> = objs.iter().map(|&v| projective_at(&p, v)).collect();
        let term = direct_sum_all(&p, &summands.iter().collect::<Vec<_>>()).expect("one poset");
        let q = cover_map(&current, &g);
        match &inclusion {
            None => augmentation = q.clone(),
            Some(inc) => differentials.push(inc.compose(&q)),
        }
        let (k, inc) = q.kernel(&term);
        gens.push(objs);
        terms.push(term);
        current = k;
        inclusion = Some(inc);
    }
    ProjectiveResolution { gens, terms, differentials, augmentation }
}

/// The cochain maps Hom(P_i, N) → Hom(P_{i+1}, N), with Hom(P_i, N) = ⊕_j N(v_j).
fn hom_cochains<F: Scalar>(res: &ProjectiveResolution<F>, n: &PosetModule<F>) -> Vec<Matrix<F>> {
    let p = n.poset();
    // row of generator j inside P_i(x)
    let position = |g: &[usize], j: usize, x: usize| g[..j].iter().filter(|&&w| p.leq(w, x)).count();
    let blocks = |g: &[usize]| {
        let mut off = Vec::with_capacity(g.len());
        let mut t = 0;
        for &v in g {
            off.push(t);
            t += n.dim(v);
        }
        (off, t)
    };
    (0..res.differentials.len())
        .map(|i| {
            let (src, tgt) = (&res.gens[i], &res.gens[i + 1]);
            let (so, st) = blocks(src);
            let (to, tt) = blocks(tgt);
            let mut delta = Matrix::zeros(tt, st);
            let d = &res.differentials[i];
            for (k, &w) in tgt.iter().enumerate() {
                let col = position(tgt, k, w);
                for (j, &v) in src.iter().enumerate() {
                    if !p.leq(v, w) {
                        continue;
                    }
                    let c = &d.components[w][(position(src, j, w), col)];
                    if !c.is_zero() {
                        delta.set_block(to[k], so[j], &n.eval(v, w).expect("v ≤ w").scale(c));
                    }
                }
            }
            delta
        })
        .collect()
}

/// dim Ext^i(M, N) for i = 0..=length of the resolution of M.
pub fn ext_dims<F: Scalar>(m: &PosetModule<F>, n: &PosetModule<F>) -> Result<Vec<usize>> {
    if !same_poset(m.poset(), n.poset()) {
        return Err(Error::PosetMismatch);
    }
    let res = projective_resolution(m);
    Ok(ext_from_resolution(&res, n))
}

pub fn ext_from_resolution<F: Scalar>(res: &ProjectiveResolution<F>, n: &PosetModule<F>) -> Vec<usize> {
    if res.terms.is_empty() {
        return vec![0];
    }
    let deltas = hom_cochains(res, n);
    let cdim: Vec<usize> = res.gens.iter().map(|g| g.iter().map(|&v| n.dim(v)).sum()).collect();
    let ranks: Vec<usize> = deltas.iter().map(|d| d.rank()).collect();
    (0..cdim.len())
        .map(|i| {
            let out = ranks.get(i).copied().unwrap_or(0);
            let inc = if i == 0 { 0 } else { ranks[i - 1] };
            cdim[i] - out - inc
        })
        .collect()
}

/// H*(P; M) = Ext*(k̲, M).
pub fn cohomology<F: Scalar>(m: &PosetModule<F>) -> Result<Vec<usize>> {
    ext_dims(&constant(m.poset(), 1), m)
}

/// χ(M, N) = Σ_i (−1)^i Σ_{F_v ∈ P_i} dim N(v).
pub fn euler_chi<F: Scalar>(m: &PosetModule<F>, n: &PosetModule<F>) -> Result<i64> {
    if !same_poset(m.poset(), n.poset()) {
        return Err(Error::PosetMismatch);
    }
    let res = projective_resolution(m);
    Ok(chi_from_resolution(&res, n))
}

fn chi_from_resolution<F: Scalar>(res: &ProjectiveResolution<F>, n: &PosetModule<F>) -> i64 {
    res.gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let s: i64 = g.iter().map(|&v| n.dim(v) as i64).sum();
            if i % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .sum()
}

/// χ(X, Y) extended bilinearly.
pub fn euler_pairing<F: Scalar>(x: &VirtualModule<F>, y: &VirtualModule<F>) -> Result<i64> {
    if !same_poset(x.poset(), y.poset()) {
        return Err(Error::PosetMismatch);
    }
    signed_pairs(x, y).map(|(s, a, b)| Ok(s * euler_chi(a, b)?)).sum()
}

/// Σ_x f(x)g(x) − Σ_{u⋖v} f(u)g(v), for posets whose Hasse diagram is a tree.
pub fn euler_form(p: &Poset, f: &DimVector, g: &DimVector) -> Result<i64> {
    if !p.is_tree() {
        return Err(Error::Hypothesis("the Hasse diagram is not a tree".into()));
    }
    let diag: i64 = (0..p.len()).map(|x| f.get(x) * g.get(x)).sum();
    let off: i64 = p.covers().iter().map(|&(u, v)| f.get(u) * g.get(v)).sum();
    Ok(diag - off)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingReport {
    pub hom_value: usize,
    pub euler_value: i64,
    pub ext_dims: Vec<usize>,
}

pub fn pairing_report<F: Scalar>(m: &PosetModule<F>, n: &PosetModule<F>) -> Result<PairingReport> {
    let ext = ext_dims(m, n)?;
    let euler_value = ext.iter().enumerate().map(|(i, &e)| if i % 2 == 0 { e as i64 } else { -(e as i64) }).sum();
    Ok(PairingReport { hom_value: hom_dim(m, n)?, euler_value, ext_dims: ext })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientPairingReport {
    /// χ(φ*M, N) − χ(β*M, N)
    pub direct: i64,
    /// χ(C_M, N) − χ(K_M, N)
    pub via_kernels: i64,
    /// the same with C_M, K_M replaced by sums of simples
    pub via_simples: i64,
}

impl GradientPairingReport {
    pub fn agrees(&self) -> bool {
        self.direct == self.via_kernels && self.direct == self.via_simples
    }
}

/// χ(∇[M], [N]) three ways.
pub fn pairing_with_gradient<F: Scalar>(m: &PosetModule<F>, n: &PosetModule<F>, l: &LineMap) -> Result<GradientPairingReport> {
    if !same_poset(n.poset(), &l.line) || !same_poset(m.poset(), &l.base) {
        return Err(Error::PosetMismatch);
    }
    let direct = euler_chi(&m.front_pullback(l), n)? - euler_chi(&m.back_pullback(l), n)?;
    let c = m.grad_cokernel_module(l);
    let k = m.grad_kernel_module(l);
    let via_kernels = euler_chi(&c, n)? - euler_chi(&k, n)?;
    let mut via_simples = 0;
    for e in 0..l.line.len() {
        let mult = c.dim(e) as i64 - k.dim(e) as i64;
        if mult != 0 {
            via_simples += mult * euler_chi(&crate::module::simple_at(&l.line, e), n)?;
        }
    }
    Ok(GradientPairingReport { direct, via_kernels, via_simples })
}

/// An injective envelope M ↪ ⊕ G_v, one G_v per basis vector of the socle at v.
pub fn injective_envelope<F: Scalar>(m: &PosetModule<F>) -> (PosetModule<F>, ModuleMap<F>) {
    let p = m.poset().clone();
    // (v, functional on M(v)) pairs
    let mut funcs: Vec<(usize, Vec<F>)> = Vec::new();
    for v in 0..p.len() {
        let d = m.dim(v);
        if d == 0 {
            continue;
        }
        let outs: Vec<&Matrix<F>> = p.out_covers(v).iter().map(|&k| m.map(k)).collect();
        let soc = if outs.is_empty() { Matrix::identity(d) } else { Matrix::vstack(&outs).kernel_basis() };
        if soc.cols() == 0 {
            continue;
        }
        // functionals λ with λ·soc = I
        let lam = soc.left_inverse().expect("socle basis has full column rank");
        for i in 0..lam.rows() {
            funcs.push((v, lam.row(i).to_vec()));
        }
    }
    let summands: Vec<PosetModule<F>> = funcs.iter().map(|(v, _)| injective_at(&p, *v)).collect();
    let inj = direct_sum_all(&p, &summands.iter().collect::<Vec<_>>()).expect("one poset");
    let components = (0..p.len())
        .map(|x| {
            let rows: Vec<Vec<F>> = funcs
                .iter()
                .filter(|(v, _)| p.leq(x, *v))
                .map(|(v, lam)| Matrix::from_vec(1, lam.len(), lam.clone()).mul(&m.eval(x, *v).expect("x ≤ v")).row(0).to_vec())
                .collect();
            if rows.is_empty() {
                Matrix::zeros(0, m.dim(x))
            } else {
                Matrix::from_rows(rows)
            }
        })
        .collect();
    (inj, ModuleMap { components })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoAdjointReport {
    /// χ(∇*[N], [M]), ⟨∇*[N], [I]−[J]⟩, ⟨[N], ∇([I]−[J])⟩
    pub left: [i64; 3],
    /// χ([M], ∇_*[N]), ⟨[P]−[Q], ∇_*[N]⟩, ⟨∇([P]−[Q]), [N]⟩
    pub right: [i64; 3],
}

impl PseudoAdjointReport {
    pub fn holds(&self) -> bool {
        self.left.iter().all(|&v| v == self.left[0]) && self.right.iter().all(|&v| v == self.right[0])
    }
}

/// The two chains of equalities relating χ with the divergences through length-one resolutions of M.
pub fn pseudo_adjointness_check<F: Scalar>(
    m: &PosetModule<F>,
    n: &PosetModule<F>,
    l: &LineMap,
) -> Result<PseudoAdjointReport> {
    let p = m.poset();
    if !p.is_tree() {
        return Err(Error::Hypothesis("the Hasse diagram is not a tree".into()));
    }
    let res = projective_resolution(m);
    if res.length() > 1 {
        return Err(Error::Hypothesis(format!("projective resolution has length {}", res.length())));
    }
    let zero = PosetModule::zero(p);
    let pp = res.terms.first().cloned().unwrap_or_else(|| zero.clone());
    let qq = res.terms.get(1).cloned().unwrap_or_else(|| zero.clone());
    let (ii, iota) = injective_envelope(m);
    let (jj, _) = iota.cokernel(&ii);
    let pq = VirtualModule::new(p, vec![pp], vec![qq])?;
    let ij = VirtualModule::new(p, vec![ii], vec![jj])?;
    let nv = VirtualModule::from_module(n);
    let mv = VirtualModule::from_module(m);
    let div_l = divergence(n, l, Side::Left)?;
    let div_r = divergence(n, l, Side::Right)?;
    let left = [
        euler_pairing(&div_l, &mv)?,
        hom_pairing(&div_l, &ij)?,
        hom_pairing(&nv, &gradient_virtual(&ij, l))?,
    ];
    let right = [
        euler_pairing(&mv, &div_r)?,
        hom_pairing(&pq, &div_r)?,
        hom_pairing(&gradient_virtual(&pq, l), &nv)?,
    ];
    Ok(PseudoAdjointReport { left, right })
}
