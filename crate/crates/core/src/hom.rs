//! Natural transformations as the solution space of the commuting-square equations.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::module::{same_poset, ModuleMap, PosetModule};
use crate::sparse::SparseEchelon;

/// Hom(M, N) in echelon form; elements are parametrized by the free unknowns.
#[derive(Clone, Debug)]
pub struct HomSpace<F: Scalar> {
    src_dims: Vec<usize>,
    tgt_dims: Vec<usize>,
    offsets: Vec<usize>,
    echelon: SparseEchelon<F>,
    free: Vec<usize>,
}

impl<F: Scalar> HomSpace<F> {
    pub fn new(m: &PosetModule<F>, n: &PosetModule<F>) -> Result<Self> {
        if !same_poset(m.poset(), n.poset()) {
            return Err(Error::PosetMismatch);
        }
        let p = m.poset();
        let (dm, dn) = (m.dims(), n.dims());
        let mut offsets = Vec::with_capacity(p.len());
        let mut t = 0;
        for x in 0..p.len() {
            offsets.push(t);
            t += dm[x] * dn[x];
        }
        let var = |x: usize, i: usize, j: usize| offsets[x] + i * dm[x] + j;
        let mut ech = SparseEchelon::new(t);
        for (k, &(u, v)) in p.covers().iter().enumerate() {
            let (mk, nk) = (m.map(k), n.map(k));
            for i in 0..dn[v] {
                for j in 0..dm[u] {
                    // (T_v·M_k − N_k·T_u)[i, j] = 0
                    let mut row = Vec::new();
                    for l in 0..dm[v] {
                        if !mk[(l, j)].is_zero() {
                            row.push((var(v, i, l), mk[(l, j)].clone()));
                        }
                    }
                    for l in 0..dn[u] {
                        if !nk[(i, l)].is_zero() {
                            row.push((var(u, l, j), nk[(i, l)].neg()));
                        }
                    }
                    if !row.is_empty() {
                        ech.push(row);
                    }
                }
            }
        }
        let free = ech.free_columns();
        Ok(HomSpace { src_dims: dm.to_vec(), tgt_dims: dn.to_vec(), offsets, echelon: ech, free })
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    fn to_map(&self, x: Vec<F>) -> ModuleMap<F> {
        let components = (0..self.src_dims.len())
            .map(|o| {
                let (r, c) = (self.tgt_dims[o], self.src_dims[o]);
                Matrix::from_vec(r, c, x[self.offsets[o]..self.offsets[o] + r * c].to_vec())
            })
            .collect();
        ModuleMap { components }
    }

    /// Linear combination of the basis with the given coefficients.
    pub fn combination(&self, coeffs: &[F]) -> ModuleMap<F> {
        assert_eq!(coeffs.len(), self.free.len());
        let vals: Vec<(usize, F)> = self.free.iter().copied().zip(coeffs.iter().cloned()).collect();
        self.to_map(self.echelon.solution(&vals))
    }

    pub fn basis(&self) -> Vec<ModuleMap<F>> {
        (0..self.free.len())
            .map(|i| {
                let mut c = vec![F::zero(); self.free.len()];
                c[i] = F::one();
                self.combination(&c)
            })
            .collect()
    }

    /// Integer coefficients drawn uniformly from [−bound, bound].
    pub fn random_element(&self, rng: &mut impl Rng, bound: i64) -> ModuleMap<F> {
        let c: Vec<F> = (0..self.free.len()).map(|_| F::from_i64(rng.gen_range(-bound..=bound))).collect();
        self.combination(&c)
    }
}

pub fn hom_space<F: Scalar>(m: &PosetModule<F>, n: &PosetModule<F>) -> Result<HomSpace<F>> {
    HomSpace::new(m, n)
}

/// dim Hom(M, N).
pub fn hom_dim<F: Scalar>(m: &PosetModule<F>, n: &PosetModule<F>) -> Result<usize> {
    Ok(HomSpace::new(m, n)?.dim())
}
