//! Isometry subalgebra, bi-invariance and the naturally reductive shape.
//!
//! # Why only `k'` is searched
//!
//! Call `Λ` *of D'Atri-Ziller form for `h`* when `h` is a subalgebra,
//! `Λ` is a scalar on each simple ideal of `h`, maps the centre `z(h)` into
//! itself, and is a single scalar on `h^⊥`.
//!
//! **Lemma.** If `Λ` has this form for some `h`, it has it for
//! `k' = isometry_subalgebra(Λ)`.
//!
//! *Sketch.* The form makes `Λ` commute with `ad_h`, so `ad_h` is skew for
//! `<,>` and `h ⊆ k'`. Hence `k'^⊥ ⊆ h^⊥`, where `Λ` is one scalar. Elements
//! of `k'` commute with `Λ`, so `Λ` preserves `k'` and restricts to an
//! `ad_{k'}`-intertwiner of `k'`. Distinct simple ideals of `k'` are
//! inequivalent as `ad_{k'}`-modules (each acts trivially on the others) and
//! each is absolutely irreducible, so `Λ` is a scalar on each. The centre is
//! the trivial isotypic piece and is preserved. ∎
//!
//! `tests/properties.rs` checks the lemma against the form tested directly
//! on sampled subalgebras.

use std::sync::Arc;

use crate::arith::{is_positive_definite, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::lie::Algebra;
use crate::subspace::{ideal_decomposition, DecomposedSubalgebra, Subspace};

use super::operator::MetricOperator;

/// Seed for the generic elements used by ideal decompositions here; the
/// result does not depend on it once the decomposition resolves.
pub const DECOMPOSITION_SEED: u64 = 0x5eed;

/// `{X : ad_X is skew for <,>}`, i.e. `ad_X^T M + M ad_X = 0` with `M = QΛ`.
pub fn isometry_subalgebra<S: Scalar>(lambda: &MetricOperator<S>) -> Result<Subspace<S>> {
    let alg = lambda.algebra();
    let n = alg.dim();
    let m = lambda.gram();
    // Column i holds the upper triangle of ad_i^T M + M ad_i.
    let sym: Vec<Matrix<S>> = (0..n)
        .map(|i| {
            let a = alg.ad_basis(i);
            let ma = m.mul(a).expect("shapes");
            ma.transpose().add(&ma).expect("shapes")
        })
        .collect();
    let blocks = (0..n).map(|r| {
        Matrix::from_fn(n - r, n, |c, i| sym[i].get(r, r + c).clone())
    });
    let sol = crate::arith::common_nullspace(n, blocks, alg.tol());
    let k = Subspace::span(alg, &sol);
    if let Some((i, j)) = k.subalgebra_violation() {
        return Err(Error::Contract(format!(
            "isometry algebra is not closed under brackets at basis pair ({}, {})",
            i + 1,
            j + 1
        )));
    }
    Ok(k)
}

/// `g` has no centre and a single simple ideal. Cached on the algebra.
pub fn is_simple<S: Scalar>(alg: &Arc<Algebra<S>>) -> Result<bool> {
    if let Some(&v) = alg.simple_cache().get() {
        return Ok(v);
    }
    let dec = ideal_decomposition(&Subspace::whole(alg), DECOMPOSITION_SEED)?;
    let v = dec.center.is_zero() && dec.ideals.len() == 1;
    let _ = alg.simple_cache().set(v);
    Ok(v)
}

/// `Λ|_k` has the bi-invariant shape: scalar on every simple ideal of `k`,
/// and the centre mapped into itself. False when `Λ` does not preserve `k`.
pub fn bi_invariance_check<S: Scalar>(lambda: &MetricOperator<S>, k: &Subspace<S>) -> Result<bool> {
    if !lambda.preserves(k) {
        return Ok(false);
    }
    let dec = ideal_decomposition(k, DECOMPOSITION_SEED)?;
    Ok(dec.ideals.iter().all(|i| lambda.scalar_on(i).is_some()) && lambda.preserves(&dec.center))
}

#[derive(Clone, Debug)]
pub struct DaZiReport<S> {
    /// `k'`, the full isometry subalgebra.
    pub isometry_subalgebra: Subspace<S>,
    pub decomposition: DecomposedSubalgebra<S>,
    /// Q-complement of `k'`.
    pub complement: Subspace<S>,
    pub verdict: bool,
    /// Scalar of `Λ` on each ideal, in the order of `decomposition.ideals`.
    pub ideal_scalars: Vec<S>,
    /// `Λ|_z` in the basis of the centre.
    pub center_block: Option<Matrix<S>>,
    /// The single eigenvalue on the complement.
    pub complement_scalar: Option<S>,
    /// Why the verdict is false.
    pub reason: Option<String>,
}

/// Decides whether `Λ = λ_1 Id_{k_1} ⊕ ... ⊕ Λ_z ⊕ λ Id_m` for the isometry
/// subalgebra `k' = z ⊕ k_1 ⊕ ...` and its complement `m`; this is the
/// naturally reductive shape. Requires a simple ambient algebra.
pub fn dazi_structure_check<S: Scalar>(lambda: &MetricOperator<S>) -> Result<DaZiReport<S>> {
    let alg = lambda.algebra();
    if !is_simple(alg)? {
        return Err(Error::Precondition(format!(
            "{} is not simple; the naturally reductive shape is only decided for simple algebras",
            alg.name()
        )));
    }
    let k = isometry_subalgebra(lambda)?;
    let dec = ideal_decomposition(&k, DECOMPOSITION_SEED)?;
    let m = k.orthogonal_complement();
    let mut report = DaZiReport {
        isometry_subalgebra: k,
        decomposition: dec,
        complement: m,
        verdict: false,
        ideal_scalars: Vec::new(),
        center_block: None,
        complement_scalar: None,
        reason: None,
    };
    let fail = |mut r: DaZiReport<S>, why: String| {
        r.reason = Some(why);
        Ok(r)
    };

    for (i, ideal) in report.decomposition.ideals.iter().enumerate() {
        match lambda.scalar_on(ideal) {
            Some(c) => report.ideal_scalars.push(c),
            None => {
                let why = format!("Λ is not scalar on ideal {} of k'", i + 1);
                return fail(report, why);
            }
        }
    }
    let z = &report.decomposition.center;
    if !z.is_zero() {
        match lambda.restricted(z) {
            Ok(b) => report.center_block = Some(b),
            Err(_) => return fail(report, "Λ does not preserve the centre of k'".into()),
        }
    }
    if !report.complement.is_zero() {
        match lambda.scalar_on(&report.complement) {
            Some(c) => report.complement_scalar = Some(c),
            None => return fail(report, "Λ is not a single scalar on the complement of k'".into()),
        }
    }

    // Rebuild from the reported pieces and compare.
    let n = alg.dim();
    let mut cols: Vec<Vec<S>> = Vec::with_capacity(n);
    let mut diag = Matrix::zeros(n, n);
    let push_scalar = |space: &Subspace<S>, c: &S, cols: &mut Vec<Vec<S>>, diag: &mut Matrix<S>| {
        for v in space.basis() {
            diag.set(cols.len(), cols.len(), c.clone());
            cols.push(v.clone());
        }
    };
    for (ideal, c) in report.decomposition.ideals.iter().zip(&report.ideal_scalars) {
        push_scalar(ideal, c, &mut cols, &mut diag);
    }
    if let Some(c) = &report.complement_scalar {
        push_scalar(&report.complement, c, &mut cols, &mut diag);
    }
    if let Some(b) = &report.center_block {
        let off = cols.len();
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                diag.set(off + i, off + j, b.get(i, j).clone());
            }
        }
        cols.extend(z.basis().iter().cloned());
        let gram = z.gram().mul(b)?;
        if !is_positive_definite(&gram.transpose(), alg.tol()) {
            return fail(report, "centre block is not positive definite".into());
        }
    }
    let tol = alg.tol();
    let p = Matrix::from_columns(&cols, n)?;
    let rebuilt = S::inverse(&p, tol)
        .ok_or_else(|| Error::Contract("k' pieces and complement do not span g".into()))
        .and_then(|pi| p.mul(&diag)?.mul(&pi))?;
    let diff = rebuilt.sub(lambda.matrix())?;
    if !diff.is_zero(tol.residual_epsilon * lambda.matrix().max_abs().max(1.0)) {
        return Err(Error::Contract("rebuilt metric differs from Λ".into()));
    }
    report.verdict = true;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Rational};
    use crate::lie::{embed_so_partition, EmbeddingLayout};
    use crate::metric::{equivariance_check, layout_block_spec, metric_from_blocks};
    use crate::testutil::so;

    fn metric(l: &EmbeddingLayout<Rational>, p: &[i64]) -> MetricOperator<Rational> {
        let p: Vec<Rational> = p.iter().map(|&x| rat(x, 1)).collect();
        metric_from_blocks(&layout_block_spec(l, &p).unwrap()).unwrap()
    }

    #[test]
    fn isometry_algebra_branches() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let k = isometry_subalgebra(&metric(&l, &[1, 2, 3, 4, 5, 6])).unwrap();
        assert!(k.same_span(&l.k()));

        let k = isometry_subalgebra(&metric(&l, &[2, 2, 7, 2, 5, 5])).unwrap();
        let expected = l.factor_subspaces[0].1.sum(&l.factor_subspaces[1].1).sum(l.block(0, 1).unwrap()).sum(&l.factor_subspaces[2].1);
        assert!(k.same_span(&expected));
        assert_eq!(k.dim(), 7);

        let k = isometry_subalgebra(&MetricOperator::scalar(&g, rat(3, 1)).unwrap()).unwrap();
        assert_eq!(k.dim(), 15);
    }

    #[test]
    fn isometries_commute_with_metric() {
        let g = so(7);
        let l = embed_so_partition(&g, 7, &[2, 2, 3]).unwrap();
        let op = metric(&l, &[1, 1, 2, 1, 3, 3]);
        let k = isometry_subalgebra(&op).unwrap();
        assert!(equivariance_check(&op, &k).holds);
        let (spaces, _) = op.eigenspaces();
        for e in spaces {
            let s = Subspace::span(&g, &e.basis);
            assert!(s.is_invariant_under(&k));
        }
    }

    #[test]
    fn equivariance_examples() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let op = metric(&l, &[1, 2, 3, 4, 5, 6]);
        assert!(equivariance_check(&op, &l.k()).holds);
        let rep = equivariance_check(&op, &Subspace::whole(&g));
        assert!(!rep.holds);
        let w = rep.witness.unwrap();
        assert!(w.residual > 0.0);
        assert!(equivariance_check(&MetricOperator::scalar(&g, rat(2, 1)).unwrap(), &Subspace::whole(&g)).holds);
    }

    #[test]
    fn bi_invariance_on_so4() {
        let g = so(4);
        let whole = Subspace::whole(&g);
        assert!(bi_invariance_check(&MetricOperator::scalar(&g, rat(1, 1)).unwrap(), &whole).unwrap());
        let dec = ideal_decomposition(&whole, 1).unwrap();
        let (a, b) = (&dec.ideals[0], &dec.ideals[1]);
        let spec = crate::metric::BlockSpec::scalars(vec![
            ("a".into(), a.clone(), rat(1, 1)),
            ("b".into(), b.clone(), rat(5, 2)),
        ]);
        assert!(bi_invariance_check(&metric_from_blocks(&spec).unwrap(), &whole).unwrap());
        // Mixing the ideals through a rotation in the (A12, A34) plane.
        let mut m = Matrix::scalar(6, rat(2, 1));
        m.set(0, 5, rat(1, 1));
        m.set(5, 0, rat(1, 1));
        let mixed = MetricOperator::new(&g, m).unwrap();
        assert!(!bi_invariance_check(&mixed, &whole).unwrap());
    }

    #[test]
    fn dazi_examples() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let r = dazi_structure_check(&MetricOperator::scalar(&g, rat(4, 1)).unwrap()).unwrap();
        assert!(r.verdict && r.complement.is_zero());

        let r = dazi_structure_check(&metric(&l, &[2, 2, 7, 2, 5, 5])).unwrap();
        assert!(r.verdict);
        assert_eq!(r.complement_scalar, Some(rat(5, 1)));
        let mut dims = r.decomposition.ideal_dims();
        dims.sort();
        assert_eq!(dims, vec![3, 3]);
        assert_eq!(r.decomposition.center.dim(), 1);

        let r = dazi_structure_check(&metric(&l, &[1, 2, 3, 4, 5, 6])).unwrap();
        assert!(!r.verdict);
        assert!(r.reason.is_some());

        // Torus with one value on m: naturally reductive with a free centre block.
        let r = dazi_structure_check(&metric(&l, &[1, 2, 3, 4, 4, 4])).unwrap();
        assert!(r.verdict);
    }

    #[test]
    fn dazi_scale_invariant() {
        let g = so(7);
        let l = embed_so_partition(&g, 7, &[2, 2, 3]).unwrap();
        for p in [[1, 1, 2, 1, 3, 3], [1, 2, 3, 4, 5, 6]] {
            let op = metric(&l, &p);
            let a = dazi_structure_check(&op).unwrap().verdict;
            let b = dazi_structure_check(&op.scaled(&rat(7, 3)).unwrap()).unwrap().verdict;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn non_simple_is_refused() {
        let g = so(4);
        assert!(matches!(
            dazi_structure_check(&MetricOperator::scalar(&g, rat(1, 1)).unwrap()),
            Err(Error::Precondition(_))
        ));
    }
}
