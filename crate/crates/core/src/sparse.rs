//! Incremental row echelon form over sparse rows, used for large homogeneous systems.

use std::collections::BTreeMap;

use crate::field::Scalar;
use crate::matrix::Matrix;

pub type SparseRow<F> = Vec<(usize, F)>;

/// Rows kept with leading coefficient one, keyed by their leading column.
#[derive(Clone, Debug)]
pub struct SparseEchelon<F: Scalar> {
    ncols: usize,
    rows: BTreeMap<usize, SparseRow<F>>,
}

fn axpy<F: Scalar>(r: &SparseRow<F>, c: &F, p: &SparseRow<F>) -> SparseRow<F> {
    // r - c·p, both sorted by column
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        if j == p.len() || (i < r.len() && r[i].0 < p[j].0) {
            out.push(r[i].clone());
            i += 1;
        } else if i == r.len() || p[j].0 < r[i].0 {
            out.push((p[j].0, p[j].1.mul(c).neg()));
            j += 1;
        } else {
            let v = r[i].1.sub(&p[j].1.mul(c));
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<F: Scalar> SparseEchelon<F> {
    pub fn new(ncols: usize) -> Self {
        SparseEchelon { ncols, rows: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rows.len()
    }

    /// Adds a row (entries in any order, duplicates summed). Returns true if the rank grew.
    pub fn push(&mut self, mut row: SparseRow<F>) -> bool {
        row.sort_by_key(|e| e.0);
        let mut r: SparseRow<F> = Vec::with_capacity(row.len());
        for (c, v) in row {
            match r.last_mut() {
                Some(last) if last.0 == c => last.1 = last.1.add(&v),
                _ => r.push((c, v)),
            }
        }
        r.retain(|e| !e.1.is_zero());
        while let Some((lead, lv)) = r.first().cloned() {
            match self.rows.get(&lead) {
                Some(p) => r = axpy(&r, &lv, p),
                None => {
                    let inv = lv.inv().expect("nonzero");
                    for e in r.iter_mut() {
                        e.1 = e.1.mul(&inv);
                    }
                    self.rows.insert(lead, r);
                    return true;
                }
            }
        }
        false
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.rows.contains_key(c)).collect()
    }

    /// The kernel vector with the given values on the free columns.
    pub fn solution(&self, free_values: &[(usize, F)]) -> Vec<F> {
        let mut x = vec![F::zero(); self.ncols];
        for (c, v) in free_values {
            x[*c] = v.clone();
        }
        for (&p, row) in self.rows.iter().rev() {
            let mut s = F::zero();
            for (c, v) in &row[1..] {
                if !x[*c].is_zero() {
                    s = s.add(&v.mul(&x[*c]));
                }
            }
            x[p] = s.neg();
        }
        x
    }

    /// Kernel basis as columns, one per free column.
    pub fn kernel_basis(&self) -> Matrix<F> {
        let free = self.free_columns();
        let mut k = Matrix::zeros(self.ncols, free.len());
        for (j, &f) in free.iter().enumerate() {
            let x = self.solution(&[(f, F::one())]);
            for (i, v) in x.into_iter().enumerate() {
                if !v.is_zero() {
                    k[(i, j)] = v;
                }
            }
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use proptest::prelude::*;

    fn dense_rows(m: &Matrix<Q>) -> Vec<SparseRow<Q>> {
        (0..m.rows())
            .map(|i| m.row(i).iter().cloned().enumerate().filter(|e| !e.1.is_zero()).collect())
            .collect()
    }

    #[test]
    fn small_system() {
        let m = Matrix::<Q>::from_i64(2, 3, &[1, 1, 0, 0, 1, 1]);
        let mut e = SparseEchelon::new(3);
        for r in dense_rows(&m) {
            e.push(r);
        }
        assert_eq!(e.rank(), 2);
        let k = e.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        assert!(!e.push(vec![(0, Q::from(2)), (1, Q::from(3)), (2, Q::from(1))]));
    }

    proptest! {
        #[test]
        fn agrees_with_dense(r in 1usize..6, c in 1usize..7, vals in proptest::collection::vec(-2i64..3, 42)) {
            let m = Matrix::<Q>::from_i64(r, c, &vals[..r * c]);
            let mut e = SparseEchelon::new(c);
            for row in dense_rows(&m) {
                e.push(row);
            }
            prop_assert_eq!(e.rank(), m.rank());
            let k = e.kernel_basis();
            prop_assert_eq!(k.cols(), c - m.rank());
            prop_assert!(m.mul(&k).is_zero());
        }
    }
}
