//! Block-diagonal embeddings `so(k_1) ⊕ ... ⊕ so(k_s) ⊂ so(n)` and the torus
//! layout of `su(n)`.

use std::sync::Arc;

use super::algebra::Algebra;
use super::classical::so_index;
use crate::arith::{vecops, Scalar};
use crate::error::{Error, Result};
use crate::subspace::Subspace;

/// Named pieces of a reductive layout `g = k ⊕ m`.
///
/// For `so(n)` the factors are named `so1, so2, ...` and the off-diagonal
/// blocks `m12, m13, ...` (1-based). For the `su(n)` torus layout the single
/// factor is `t`.
#[derive(Clone, Debug)]
pub struct EmbeddingLayout<S> {
    pub algebra: Arc<Algebra<S>>,
    pub partition: Vec<usize>,
    pub factor_subspaces: Vec<(String, Subspace<S>)>,
    pub offdiag_blocks: Vec<((usize, usize), String, Subspace<S>)>,
}

impl<S: Scalar> EmbeddingLayout<S> {
    /// Sum of the factors.
    pub fn k(&self) -> Subspace<S> {
        self.factor_subspaces
            .iter()
            .fold(Subspace::zero(&self.algebra), |acc, (_, s)| acc.sum(s))
    }

    /// Sum of the off-diagonal blocks.
    pub fn m(&self) -> Subspace<S> {
        self.offdiag_blocks
            .iter()
            .fold(Subspace::zero(&self.algebra), |acc, (_, _, s)| acc.sum(s))
    }

    pub fn named_subspaces(&self) -> Vec<(String, Subspace<S>)> {
        self.factor_subspaces
            .iter()
            .cloned()
            .chain(self.offdiag_blocks.iter().map(|(_, n, s)| (n.clone(), s.clone())))
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<&Subspace<S>> {
        self.factor_subspaces
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .or_else(|| self.offdiag_blocks.iter().find(|(_, n, _)| n == name).map(|(_, _, s)| s))
    }

    /// Off-diagonal block between factors `i < j` (0-based).
    pub fn block(&self, i: usize, j: usize) -> Option<&Subspace<S>> {
        let key = (i.min(j), i.max(j));
        self.offdiag_blocks.iter().find(|(p, _, _)| *p == key).map(|(_, _, s)| s)
    }
}

/// `alg` must be the built-in `so(n)`.
pub fn embed_so_partition<S: Scalar>(
    alg: &Arc<Algebra<S>>,
    n: usize,
    partition: &[usize],
) -> Result<EmbeddingLayout<S>> {
    if partition.is_empty() || partition.contains(&0) {
        return Err(Error::Unsupported(format!("partition {partition:?} must have positive parts")));
    }
    let total: usize = partition.iter().sum();
    if total != n {
        return Err(Error::DimensionMismatch(format!(
            "partition {partition:?} sums to {total}, expected {n}"
        )));
    }
    if alg.dim() != n * (n - 1) / 2 {
        return Err(Error::DimensionMismatch(format!(
            "algebra has dimension {}, so({n}) has {}",
            alg.dim(),
            n * (n - 1) / 2
        )));
    }
    let mut offsets = Vec::with_capacity(partition.len());
    let mut acc = 0;
    for &k in partition {
        offsets.push(acc..acc + k);
        acc += k;
    }
    let unit = |a: usize, b: usize| vecops::unit::<S>(alg.dim(), so_index(n, a, b));
    let mut factors = Vec::new();
    for (i, r) in offsets.iter().enumerate() {
        let mut vecs = Vec::new();
        for a in r.clone() {
            for b in a + 1..r.end {
                vecs.push(unit(a, b));
            }
        }
        factors.push((format!("so{}", i + 1), Subspace::from_basis(alg, vecs)?));
    }
    let mut blocks = Vec::new();
    for i in 0..partition.len() {
        for j in i + 1..partition.len() {
            let mut vecs = Vec::new();
            for a in offsets[i].clone() {
                for b in offsets[j].clone() {
                    vecs.push(unit(a, b));
                }
            }
            blocks.push(((i, j), format!("m{}{}", i + 1, j + 1), Subspace::from_basis(alg, vecs)?));
        }
    }
    Ok(EmbeddingLayout {
        algebra: alg.clone(),
        partition: partition.to_vec(),
        factor_subspaces: factors,
        offdiag_blocks: blocks,
    })
}

/// Maximal torus of the built-in `su(n)` with root blocks
/// `m_ij = span(A_ij, S_ij)`.
pub fn su_torus_layout<S: Scalar>(alg: &Arc<Algebra<S>>, n: usize) -> Result<EmbeddingLayout<S>> {
    let pairs = n * (n - 1) / 2;
    if n < 2 || alg.dim() != n * n - 1 {
        return Err(Error::DimensionMismatch(format!("algebra of dimension {} is not su({n})", alg.dim())));
    }
    let d = alg.dim();
    let torus: Vec<Vec<S>> = (0..n - 1).map(|k| vecops::unit(d, 2 * pairs + k)).collect();
    let mut blocks = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = so_index(n, i, j);
            let vecs = vec![vecops::unit(d, p), vecops::unit(d, pairs + p)];
            blocks.push(((i, j), format!("m{}{}", i + 1, j + 1), Subspace::from_basis(alg, vecs)?));
        }
    }
    Ok(EmbeddingLayout {
        algebra: alg.clone(),
        partition: vec![1; n],
        factor_subspaces: vec![("t".into(), Subspace::from_basis(alg, torus)?)],
        offdiag_blocks: blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Rational, ToleranceProfile};
    use crate::lie::{build_classical, Family};

    fn so(n: usize) -> Arc<Algebra<Rational>> {
        Algebra::with_killing(format!("so({n})"), build_classical(Family::So, n).unwrap(), ToleranceProfile::default())
            .unwrap()
    }

    #[test]
    fn so6_torus_blocks() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        assert_eq!(l.k().dim(), 3);
        assert!(l.k().is_subalgebra());
        for (_, _, b) in &l.offdiag_blocks {
            assert_eq!(b.dim(), 4);
        }
        assert_eq!(l.m().dim(), 12);
        assert!(l.m().same_span(&l.k().orthogonal_complement()));
    }

    #[test]
    fn so9_three_blocks() {
        let g = so(9);
        let l = embed_so_partition(&g, 9, &[3, 3, 3]).unwrap();
        assert_eq!(l.k().dim(), 9);
        assert!(l.offdiag_blocks.iter().all(|(_, _, b)| b.dim() == 9));
    }

    #[test]
    fn single_part_is_whole() {
        let g = so(4);
        let l = embed_so_partition(&g, 4, &[4]).unwrap();
        assert_eq!(l.k().dim(), 6);
        assert!(l.offdiag_blocks.is_empty());
        assert!(embed_so_partition(&g, 4, &[2, 1]).is_err());
        assert!(embed_so_partition(&g, 4, &[4, 0]).is_err());
    }

    #[test]
    fn block_bracket_relations() {
        let g = so(7);
        let l = embed_so_partition(&g, 7, &[3, 2, 2]).unwrap();
        let s = l.partition.len();
        for (i, (_, f)) in l.factor_subspaces.iter().enumerate() {
            for (&(a, b), _, blk) in l.offdiag_blocks.iter().map(|(p, n, s)| (p, n, s)) {
                let br = f.bracket_span(blk);
                if i == a || i == b {
                    assert!(br.same_span(blk));
                } else {
                    assert!(br.is_zero());
                }
            }
        }
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let br = l.block(i, j).unwrap().bracket_span(l.block(j, k).unwrap());
                    assert!(br.contains_subspace(l.block(i, k).unwrap()));
                    assert!(l.block(i, k).unwrap().contains_subspace(&br.intersection(&l.m())));
                }
            }
        }
    }

    #[test]
    fn su3_torus() {
        let s = build_classical::<Rational>(Family::Su, 3).unwrap();
        let g = Algebra::with_killing("su(3)", s, ToleranceProfile::default()).unwrap();
        let l = su_torus_layout(&g, 3).unwrap();
        let t = l.k();
        assert_eq!(t.dim(), 2);
        assert!(t.bracket_span(&t).is_zero());
        for (_, _, b) in &l.offdiag_blocks {
            assert!(t.bracket_span(b).same_span(b));
        }
    }
}
