//! Gradient, divergences, Laplacians and the tree constructions around them.

mod integrate;
mod kan;
mod transport;

pub use integrate::integrate_injective;
pub use kan::{
    divergence, divergence_virtual, harmonic_check, kan_extension, kan_tree_closed_form, laplacian, HarmonicReport,
    Kan, Side,
};
pub use transport::{
    module_from_transport, random_transport_module, vanishing_on_tree, KerImReport, TransportCertificate,
    TransportSystem, VanishingVerdict,
};

use crate::error::Result;
use crate::field::Scalar;
use crate::grothendieck::{virtual_equal, IsoOptions, Verdict, VirtualModule};
use crate::line::LineMap;
use crate::module::PosetModule;

/// ∇[M] = [φ*M] − [β*M] over the line poset.
#[derive(Clone, Debug)]
pub struct GradientResult<F: Scalar> {
    pub line: LineMap,
    /// φ*M
    pub plus: PosetModule<F>,
    /// β*M
    pub minus: PosetModule<F>,
}

impl<F: Scalar> GradientResult<F> {
    pub fn as_virtual(&self) -> VirtualModule<F> {
        VirtualModule::new(&self.line.line, vec![self.plus.clone()], vec![self.minus.clone()]).expect("one poset")
    }
}

pub fn gradient<F: Scalar>(m: &PosetModule<F>) -> GradientResult<F> {
    let line = LineMap::new(m.poset());
    gradient_on(m, &line)
}

/// Gradient with a line map computed once and shared.
pub fn gradient_on<F: Scalar>(m: &PosetModule<F>, line: &LineMap) -> GradientResult<F> {
    GradientResult { line: line.clone(), plus: m.front_pullback(line), minus: m.back_pullback(line) }
}

/// The gradient extended additively to formal differences.
pub fn gradient_virtual<F: Scalar>(x: &VirtualModule<F>, line: &LineMap) -> VirtualModule<F> {
    let fx = x.front_pullback(line);
    let bx = x.back_pullback(line);
    let mut plus = fx.plus;
    plus.extend(bx.minus);
    let mut minus = bx.plus;
    minus.extend(fx.minus);
    VirtualModule::new(&line.line, plus, minus).expect("one poset")
}

#[derive(Clone, Debug)]
pub struct LeibnizReport<F: Scalar> {
    /// ∇([M]·[N])
    pub lhs: VirtualModule<F>,
    /// ∇[M]·φ*[N] + β*[M]·∇[N]
    pub rhs: VirtualModule<F>,
    pub verdict: Verdict<F>,
}

/// Compares ∇([M]·[N]) with ∇[M]·φ*[N] + β*[M]·∇[N].
pub fn leibniz_check<F: Scalar>(m: &PosetModule<F>, n: &PosetModule<F>, opts: &IsoOptions) -> Result<LeibnizReport<F>> {
    let line = LineMap::new(m.poset());
    let mn = m.tensor(n)?;
    let lhs = gradient_on(&mn, &line).as_virtual();
    let (fm, bm) = (m.front_pullback(&line), m.back_pullback(&line));
    let (fn_, bn) = (n.front_pullback(&line), n.back_pullback(&line));
    let rhs = VirtualModule::new(
        &line.line,
        vec![fm.tensor(&fn_)?, bm.tensor(&fn_)?],
        vec![bm.tensor(&fn_)?, bm.tensor(&bn)?],
    )?;
    let verdict = virtual_equal(&lhs, &rhs, opts)?;
    Ok(LeibnizReport { lhs, rhs, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::grothendieck::dimvec;
    use crate::matrix::Matrix;
    use crate::module::{constant, constant_zero_maps};
    use crate::poset::Poset;
    use std::sync::Arc;

    fn diamond() -> Arc<Poset> {
        Arc::new(
            Poset::from_covers(&["bot", "a", "b", "top"], &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])
                .unwrap(),
        )
    }

    #[test]
    fn constants_have_no_gradient() {
        let o = IsoOptions::default();
        for p in [diamond(), Arc::new(Poset::chain(4))] {
            for m in [constant::<Q>(&p, 1), constant_zero_maps(&p, 2)] {
                let g = gradient(&m);
                let z = VirtualModule::zero(&g.line.line);
                assert!(virtual_equal(&g.as_virtual(), &z, &o).unwrap().is_isomorphic());
            }
        }
    }

    #[test]
    fn gradient_dims() {
        let c = Arc::new(Poset::chain(2));
        let m = PosetModule::<Q>::new(c, vec![2, 3], vec![Matrix::zeros(3, 2)]).unwrap();
        assert_eq!(dimvec(&gradient(&m).as_virtual()).0, vec![1]);
    }

    #[test]
    fn gradient_is_additive() {
        let c = Arc::new(Poset::chain(3));
        let l = LineMap::new(&c);
        let m = PosetModule::<Q>::new(c.clone(), vec![1, 1, 1], vec![Matrix::from_i64(1, 1, &[0]); 2]).unwrap();
        let n = constant::<Q>(&c, 2);
        let o = IsoOptions::default();
        let sum = VirtualModule::new(&c, vec![m.clone(), n.clone()], vec![]).unwrap();
        let lhs = gradient_virtual(&sum, &l);
        let rhs = gradient_virtual(&VirtualModule::from_module(&m), &l)
            + gradient_virtual(&VirtualModule::from_module(&n), &l);
        assert!(virtual_equal(&lhs, &rhs, &o).unwrap().is_isomorphic());
        let zero = gradient_virtual(&VirtualModule::<Q>::zero(&c), &l);
        assert!(zero.is_formally_zero());
        let mm = gradient_virtual(&VirtualModule::difference(&m, &m).unwrap(), &l);
        assert!(virtual_equal(&mm, &VirtualModule::zero(&l.line), &o).unwrap().is_isomorphic());
    }

    #[test]
    fn leibniz_on_constants() {
        let c = Arc::new(Poset::chain(3));
        let k = constant::<Q>(&c, 1);
        let r = leibniz_check(&k, &k, &IsoOptions::default()).unwrap();
        assert!(r.verdict.is_isomorphic());
        assert!(dimvec(&r.lhs).is_zero());
    }
}
