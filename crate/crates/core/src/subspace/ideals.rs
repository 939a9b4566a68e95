use super::ops::centralizer_in;
use super::space::Subspace;
use crate::arith::Scalar;
use crate::error::{Error, Result};
use crate::rep::isotypic_decomposition;

/// `k = z ⊕ k_1 ⊕ ... ⊕ k_r` with `z` the centre and `k_i` simple ideals.
#[derive(Clone, Debug)]
pub struct DecomposedSubalgebra<S> {
    pub center: Subspace<S>,
    pub ideals: Vec<Subspace<S>>,
}

impl<S: Scalar> DecomposedSubalgebra<S> {
    pub fn ideal_dims(&self) -> Vec<usize> {
        self.ideals.iter().map(|i| i.dim()).collect()
    }
}

/// Splits a compact subalgebra into its centre and simple ideals. The simple
/// ideals are the isotypic components of `[k, k]` acting on itself, since
/// distinct simple ideals are inequivalent as modules.
pub fn ideal_decomposition<S: Scalar>(k: &Subspace<S>, seed: u64) -> Result<DecomposedSubalgebra<S>> {
    if let Some((i, j)) = k.subalgebra_violation() {
        return Err(Error::NotSubalgebra(i + 1, j + 1));
    }
    let center = centralizer_in(k, k);
    let s = k.bracket_span(k);
    let dec = isotypic_decomposition(&s, &s, seed)?;
    if !dec.resolved {
        return Err(Error::Contract("semisimple part did not split into ideals".into()));
    }
    let ideals: Vec<Subspace<S>> = dec.components.into_iter().map(|c| c.space).collect();
    for ideal in &ideals {
        if !ideal.is_subalgebra() || !ideal.is_invariant_under(k) {
            return Err(Error::Contract("isotypic component of [k, k] is not an ideal".into()));
        }
    }
    if center.dim() + s.dim() != k.dim() {
        return Err(Error::Contract(format!(
            "centre ({}) and derived algebra ({}) do not fill k ({})",
            center.dim(),
            s.dim(),
            k.dim()
        )));
    }
    Ok(DecomposedSubalgebra { center, ideals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Rational, ToleranceProfile};
    use crate::lie::{build_classical, embed_so_partition, Algebra, Family};

    #[test]
    fn so4_has_two_so3_ideals() {
        let s = build_classical::<Rational>(Family::So, 4).unwrap();
        let g = Algebra::with_killing("so(4)", s, ToleranceProfile::default()).unwrap();
        let dec = ideal_decomposition(&Subspace::whole(&g), 7).unwrap();
        assert_eq!(dec.center.dim(), 0);
        let mut dims = dec.ideal_dims();
        dims.sort();
        assert_eq!(dims, vec![3, 3]);
    }

    #[test]
    fn torus_is_all_centre() {
        let s = build_classical::<Rational>(Family::So, 6).unwrap();
        let g = Algebra::with_killing("so(6)", s, ToleranceProfile::default()).unwrap();
        let layout = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let dec = ideal_decomposition(&layout.k(), 1).unwrap();
        assert_eq!(dec.center.dim(), 3);
        assert!(dec.ideals.is_empty());
    }

    #[test]
    fn mixed_block_subalgebra() {
        let s = build_classical::<Rational>(Family::So, 7).unwrap();
        let g = Algebra::with_killing("so(7)", s, ToleranceProfile::default()).unwrap();
        let layout = embed_so_partition(&g, 7, &[4, 2, 1]).unwrap();
        let dec = ideal_decomposition(&layout.k(), 3).unwrap();
        assert_eq!(dec.center.dim(), 1);
        let mut dims = dec.ideal_dims();
        dims.sort();
        assert_eq!(dims, vec![3, 3]);
    }
}
