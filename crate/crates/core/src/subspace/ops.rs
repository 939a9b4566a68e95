use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::space::Subspace;
use crate::arith::{common_nullspace, vecops, Matrix, Scalar};
use crate::error::{Error, Result};

/// Number of generic elements tried by [`rank_estimate`].
pub const RANK_RETRIES: usize = 5;

/// `{X in within : [X, a] = 0 for all a in A}`.
pub fn centralizer_in<S: Scalar>(a: &Subspace<S>, within: &Subspace<S>) -> Subspace<S> {
    let alg = a.ambient();
    if within.is_zero() {
        return within.clone();
    }
    let cols = within.basis_columns();
    let blocks = a.basis().iter().map(|x| alg.ad(x).mul(&cols).expect("shapes"));
    let coeffs = common_nullspace(within.dim(), blocks, alg.tol());
    let vecs: Vec<Vec<S>> = coeffs.iter().map(|c| within.vector(c)).collect();
    Subspace::span(alg, &vecs)
}

/// `n_g(k) = {X : [X, k] ⊆ k}`, cross-checked against `k ⊕ c_m(k)`.
pub fn normalizer<S: Scalar>(k: &Subspace<S>) -> Result<Subspace<S>> {
    Ok(normalizer_decomposition(k)?.normalizer)
}

#[derive(Clone, Debug)]
pub struct NormalizerDecomposition<S> {
    pub normalizer: Subspace<S>,
    /// Q-orthogonal complement `m` of `k`.
    pub complement: Subspace<S>,
    /// `c_m(k)`.
    pub centralizer: Subspace<S>,
}

pub fn normalizer_decomposition<S: Scalar>(k: &Subspace<S>) -> Result<NormalizerDecomposition<S>> {
    let alg = k.ambient();
    if let Some((i, j)) = k.subalgebra_violation() {
        return Err(Error::NotSubalgebra(i + 1, j + 1));
    }
    let m = k.orthogonal_complement();
    let c = centralizer_in(k, &m);
    let n = if m.is_zero() {
        Subspace::whole(alg)
    } else {
        // Rows Q m_l annihilate k; X normalizes k iff Q(m_l, [k_i, X]) = 0.
        let ann_rows: Vec<Vec<S>> = m.basis().iter().map(|v| alg.q().mul_vec(v).expect("length")).collect();
        let ann = Matrix::from_rows_with_cols(&ann_rows, alg.dim())?;
        let blocks = k.basis().iter().map(|x| ann.mul(&alg.ad(x)).expect("shapes"));
        let sol = common_nullspace(alg.dim(), blocks, alg.tol());
        Subspace::span(alg, &sol)
    };
    let direct = k.sum(&c);
    if !(n.same_span(&direct) && direct.dim() == k.dim() + c.dim() && k.is_orthogonal_to(&c)) {
        return Err(Error::Contract(format!(
            "normalizer of dimension {} does not split as k ({}) plus c_m(k) ({})",
            n.dim(),
            k.dim(),
            c.dim()
        )));
    }
    Ok(NormalizerDecomposition {
        normalizer: n,
        complement: m,
        centralizer: c,
    })
}

/// A generic element and its centralizer, which realises the rank.
#[derive(Clone, Debug)]
pub struct CartanWitness<S> {
    pub generic_element: Vec<S>,
    pub centralizer: Subspace<S>,
    pub retry_count: usize,
}

/// Rank of a compact subalgebra: minimal dimension of the centralizer (in
/// `s`) of an element with random small-integer coordinates, over
/// [`RANK_RETRIES`] seeded draws.
pub fn rank_estimate<S: Scalar>(s: &Subspace<S>, seed: u64) -> (usize, CartanWitness<S>) {
    let alg = s.ambient();
    let n = alg.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<CartanWitness<S>> = None;
    for attempt in 0..RANK_RETRIES {
        if s.is_zero() {
            best = Some(CartanWitness {
                generic_element: vecops::zeros(n),
                centralizer: s.clone(),
                retry_count: attempt + 1,
            });
            break;
        }
        let coeffs: Vec<S> = loop {
            let c: Vec<i64> = (0..s.dim()).map(|_| rng.gen_range(-9..=9)).collect();
            if c.iter().any(|&x| x != 0) {
                break c.into_iter().map(S::from_i64).collect();
            }
        };
        let h = s.vector(&coeffs);
        let h_space = Subspace::span(alg, std::slice::from_ref(&h));
        let cent = centralizer_in(&h_space, s);
        if best.as_ref().is_none_or(|b| cent.dim() < b.centralizer.dim()) {
            best = Some(CartanWitness {
                generic_element: h,
                centralizer: cent,
                retry_count: attempt + 1,
            });
        }
    }
    let w = best.expect("at least one attempt");
    (w.centralizer.dim(), w)
}

pub fn has_maximal_rank<S: Scalar>(k: &Subspace<S>, seed: u64) -> bool {
    let g = Subspace::whole(k.ambient());
    rank_estimate(k, seed).0 == rank_estimate(&g, seed).0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub regular: bool,
    pub maximal_rank: bool,
    pub rank_k: usize,
    pub rank_normalizer: usize,
    pub rank_g: usize,
    pub dim_normalizer: usize,
    pub dim_centralizer: usize,
    /// `c_m(k) = 0`.
    pub self_normalizing: bool,
}

/// `k` is regular iff its normalizer contains a Cartan subalgebra of `g`,
/// i.e. iff `rank n_g(k) = rank g`.
pub fn is_regular<S: Scalar>(k: &Subspace<S>, seed: u64) -> Result<RegularityReport> {
    let dec = normalizer_decomposition(k)?;
    let g = Subspace::whole(k.ambient());
    let rank_g = rank_estimate(&g, seed).0;
    let rank_n = rank_estimate(&dec.normalizer, seed).0;
    let rank_k = rank_estimate(k, seed).0;
    Ok(RegularityReport {
        regular: rank_n == rank_g,
        maximal_rank: rank_k == rank_g,
        rank_k,
        rank_normalizer: rank_n,
        rank_g,
        dim_normalizer: dec.normalizer.dim(),
        dim_centralizer: dec.centralizer.dim(),
        self_normalizing: dec.centralizer.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use crate::lie::{embed_so_partition, so_index};
    use crate::testutil::{so, so_f64};

    #[test]
    fn torus_of_so6_is_self_normalizing() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let k = l.k();
        let dec = normalizer_decomposition(&k).unwrap();
        assert!(dec.centralizer.is_zero());
        assert!(dec.normalizer.same_span(&k));
        assert_eq!(dec.complement.dim(), 12);
    }

    #[test]
    fn centralizer_of_so4_ideal_is_other_ideal() {
        let g = so(4);
        let d = g.dim();
        let v = |pairs: &[(usize, usize, i64)]| {
            let mut x: Vec<Rational> = vecops::zeros(d);
            for &(i, j, c) in pairs {
                x[so_index(4, i, j)] = Rational::from_integer(c.into());
            }
            x
        };
        // Self-dual and anti-self-dual combinations.
        let plus = Subspace::span(&g, &[v(&[(0, 1, 1), (2, 3, 1)]), v(&[(0, 2, 1), (1, 3, -1)]), v(&[(0, 3, 1), (1, 2, 1)])]);
        let minus = Subspace::span(&g, &[v(&[(0, 1, 1), (2, 3, -1)]), v(&[(0, 2, 1), (1, 3, 1)]), v(&[(0, 3, 1), (1, 2, -1)])]);
        assert!(plus.is_subalgebra());
        let c = centralizer_in(&plus, &Subspace::whole(&g));
        assert!(c.same_span(&minus));
        let z = Subspace::zero(&g);
        assert!(centralizer_in(&z, &plus).same_span(&plus));
    }

    #[test]
    fn normalizer_of_zero_is_everything() {
        let g = so(5);
        let n = normalizer(&Subspace::zero(&g)).unwrap();
        assert_eq!(n.dim(), g.dim());
    }

    #[test]
    fn cartan_of_so5_normalizer() {
        let g = so(5);
        let t = Subspace::coordinate(&g, &[so_index(5, 0, 1), so_index(5, 2, 3)]);
        let n = normalizer(&t).unwrap();
        assert!(n.same_span(&t));
        assert!(is_regular(&t, 3).unwrap().regular);
    }

    #[test]
    fn non_subalgebra_is_rejected() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let m12 = l.block(0, 1).unwrap();
        assert!(!m12.is_subalgebra());
        assert!(matches!(normalizer(m12), Err(Error::NotSubalgebra(_, _))));
    }

    #[test]
    fn ranks() {
        let g = so(4);
        assert_eq!(rank_estimate(&Subspace::whole(&g), 1).0, 2);
        let g9 = so(9);
        let l = embed_so_partition(&g9, 9, &[3, 3, 3]).unwrap();
        let (r, w) = rank_estimate(&l.k(), 5);
        assert_eq!(r, 3);
        assert!(w.centralizer.bracket_span(&w.centralizer).is_zero());
        let t = Subspace::coordinate(&g, &[0, 5]);
        assert_eq!(rank_estimate(&t, 1).0, 2);
    }

    #[test]
    fn regularity_examples() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let rep = is_regular(&l.k(), 11).unwrap();
        assert!(rep.regular && rep.maximal_rank && rep.self_normalizing);
        assert_eq!((rep.rank_k, rep.rank_g), (3, 3));

        let g9 = so(9);
        let l9 = embed_so_partition(&g9, 9, &[3, 3, 3]).unwrap();
        let rep = is_regular(&l9.k(), 11).unwrap();
        assert!(!rep.regular);
        assert!(rep.self_normalizing);
        assert_eq!((rep.rank_normalizer, rep.rank_g), (3, 4));

        let z = is_regular(&Subspace::zero(&g), 0).unwrap();
        assert!(z.regular);
    }

    #[test]
    fn float_backend_agrees_on_regularity() {
        let g = so_f64(9);
        let l = embed_so_partition(&g, 9, &[3, 3, 3]).unwrap();
        let rep = is_regular(&l.k(), 11).unwrap();
        assert!(!rep.regular);
        assert_eq!(rep.rank_g, 4);
    }
}
