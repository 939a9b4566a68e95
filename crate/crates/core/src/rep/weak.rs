use serde::Serialize;

use super::hom::intertwiner_space;
use crate::arith::Scalar;
use crate::error::Result;
use crate::subspace::{normalizer_decomposition, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakRegularityReport {
    pub dim_k: usize,
    /// `c_m(k)`.
    pub dim_c: usize,
    /// Q-complement of the normalizer.
    pub dim_p: usize,
    /// `dim Hom_n(k, p)`.
    pub intertwiner_dim: usize,
    pub weakly_regular: bool,
}

/// No `ad_n`-submodule of `k` is equivalent to a submodule of `p`, where `n`
/// is the normalizer of `k` and `p` its Q-complement.
pub fn is_weakly_regular<S: Scalar>(k: &Subspace<S>) -> Result<WeakRegularityReport> {
    let dec = normalizer_decomposition(k)?;
    let p = dec.normalizer.orthogonal_complement();
    let intertwiner_dim = if k.is_zero() || p.is_zero() {
        0
    } else {
        intertwiner_space(&dec.normalizer, k, &p)?.dim()
    };
    Ok(WeakRegularityReport {
        dim_k: k.dim(),
        dim_c: dec.centralizer.dim(),
        dim_p: p.dim(),
        intertwiner_dim,
        weakly_regular: intertwiner_dim == 0,
    })
}

/// Sufficient condition: `Hom_k(k, m) = 0` for the Q-complement `m`.
/// When it holds, weak regularity is rechecked and must agree.
pub fn criterion_weak_regularity<S: Scalar>(k: &Subspace<S>) -> Result<bool> {
    let m = k.orthogonal_complement();
    if let Some((i, j)) = k.subalgebra_violation() {
        return Err(crate::error::Error::NotSubalgebra(i + 1, j + 1));
    }
    let holds = k.is_zero() || m.is_zero() || intertwiner_space(k, k, &m)?.dim() == 0;
    if holds && !is_weakly_regular(k)?.weakly_regular {
        return Err(crate::error::Error::Contract(
            "Hom_k(k, m) = 0 but k is not weakly regular".into(),
        ));
    }
    Ok(holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::embed_so_partition;
    use crate::testutil::so;

    #[test]
    fn torus_in_so6() {
        let g = so(6);
        let k = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap().k();
        let rep = is_weakly_regular(&k).unwrap();
        assert!(rep.weakly_regular);
        assert_eq!((rep.dim_k, rep.dim_c, rep.dim_p), (3, 0, 12));
        assert!(criterion_weak_regularity(&k).unwrap());
    }

    #[test]
    fn so3_cubed_in_so9() {
        let g = so(9);
        let k = embed_so_partition(&g, 9, &[3, 3, 3]).unwrap().k();
        assert!(is_weakly_regular(&k).unwrap().weakly_regular);
        assert!(criterion_weak_regularity(&k).unwrap());
    }

    #[test]
    fn degenerate_cases() {
        let g = so(5);
        assert!(is_weakly_regular(&Subspace::zero(&g)).unwrap().weakly_regular);
        assert!(criterion_weak_regularity(&Subspace::whole(&g)).unwrap());
    }

    #[test]
    fn so2_in_so3_is_not_criterion_disjoint() {
        // so(2) acts trivially on itself and by rotation on m, so Hom_k(k, m) = 0,
        // but inside so(2) + so(1) + ... a trivial summand of m would break it.
        let g = so(4);
        let l = embed_so_partition(&g, 4, &[2, 1, 1]).unwrap();
        let k = l.k();
        // m_23 is centralized by k, so k ≅ m_23 as trivial modules.
        assert!(!criterion_weak_regularity(&k).unwrap());
        let rep = is_weakly_regular(&k).unwrap();
        assert_eq!(rep.dim_c, 1);
    }
}
