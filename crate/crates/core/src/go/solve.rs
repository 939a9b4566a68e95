//! The linear system behind the geodesic-orbit condition: for a direction
//! `X`, find `W ∈ k` with `[W + X, ΛX] = 0`, i.e. `[W, ΛX] = [ΛX, X]`.

use serde::Serialize;

use crate::arith::{solve_linear, vecops, Matrix, Rational, Scalar, SolveOutcome};
use crate::error::{Error, Result};
use crate::metric::{equivariance_check, MetricOperator};
use crate::subspace::Subspace;

/// `W(X)` with `[W + X, ΛX] = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GoCertificate<S> {
    pub direction: Vec<S>,
    pub witness: Vec<S>,
    /// Max-norm of `[W + X, ΛX]`; zero on the exact backend.
    pub residual: f64,
}

/// A direction for which no `W` exists. On the exact backend
/// `rank_ab = rank_a + 1` proves it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample<S> {
    pub direction: Vec<S>,
    pub rank_a: usize,
    pub rank_ab: usize,
    /// Least-squares residual on the float backend; infinite on the exact one.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GoSolve<S> {
    Solved(GoCertificate<S>),
    Unsolvable(Counterexample<S>),
}

impl<S> GoSolve<S> {
    pub fn is_solved(&self) -> bool {
        matches!(self, GoSolve::Solved(_))
    }
}

/// Precomputed data for repeated solves against one `(Λ, k)`.
pub(crate) struct GoSystem<'a, S> {
    lambda: &'a MetricOperator<S>,
    k_cols: Matrix<S>,
    k_gram: Matrix<S>,
}

impl<'a, S: Scalar> GoSystem<'a, S> {
    pub(crate) fn new(lambda: &'a MetricOperator<S>, k: &Subspace<S>) -> Self {
        GoSystem {
            lambda,
            k_cols: k.basis_columns(),
            k_gram: k.gram(),
        }
    }

    /// Coefficients of `[k_j, ΛX]` as columns, and `[ΛX, X]`.
    fn system(&self, x: &[S]) -> (Matrix<S>, Vec<S>, Vec<S>) {
        let alg = self.lambda.algebra();
        let lx = self.lambda.apply(x);
        let a = alg.ad(&lx).mul(&self.k_cols).expect("shapes").scale(&-S::one());
        let b = alg.bracket(&lx, x);
        (a, b, lx)
    }

    pub(crate) fn solve(&self, x: &[S]) -> Result<GoSolve<S>> {
        let alg = self.lambda.algebra();
        let tol = alg.tol();
        let (a, b, lx) = self.system(x);
        match solve_linear(&a, &b, tol)? {
            SolveOutcome::Inconsistent {
                rank_a,
                rank_ab,
                residual,
            } => Ok(GoSolve::Unsolvable(Counterexample {
                direction: x.to_vec(),
                rank_a,
                rank_ab,
                residual,
            })),
            SolveOutcome::Solution { x: w0, nullspace } => {
                let w = self.min_norm(w0, &nullspace)?;
                let witness = self.k_cols.mul_vec(&w)?;
                let r = alg.bracket(&vecops::add(&witness, x), &lx);
                Ok(GoSolve::Solved(GoCertificate {
                    direction: x.to_vec(),
                    witness,
                    residual: vecops::max_abs(&r),
                }))
            }
        }
    }

    /// Removes the component of `w0` along the solution nullspace, measured in
    /// the Q-norm of `W = K w`.
    fn min_norm(&self, w0: Vec<S>, nullspace: &[Vec<S>]) -> Result<Vec<S>> {
        if nullspace.is_empty() {
            return Ok(w0);
        }
        let d = w0.len();
        let n = Matrix::from_columns(nullspace, d)?;
        let ntg = n.transpose().mul(&self.k_gram)?;
        let m = ntg.mul(&n)?;
        let inv = S::inverse(&m, self.lambda.algebra().tol())
            .ok_or_else(|| Error::Contract("nullspace Gram matrix is singular".into()))?;
        let y = inv.mul_vec(&ntg.mul_vec(&w0)?)?;
        Ok(vecops::sub(&w0, &n.mul_vec(&y)?))
    }
}

pub(crate) fn require_equivariant<S: Scalar>(lambda: &MetricOperator<S>, k: &Subspace<S>) -> Result<()> {
    let rep = equivariance_check(lambda, k);
    if let Some(w) = rep.witness {
        return Err(Error::Precondition(format!(
            "metric is not ad_k-equivariant (basis vector {} of k, residual {:e})",
            w.index, w.residual
        )));
    }
    Ok(())
}

/// Solves for a minimum-norm witness at one direction.
pub fn go_solve_at<S: Scalar>(lambda: &MetricOperator<S>, k: &Subspace<S>, x: &[S]) -> Result<GoSolve<S>> {
    require_equivariant(lambda, k)?;
    if x.len() != lambda.dim() {
        return Err(Error::DimensionMismatch(format!(
            "direction has {} entries, algebra has dimension {}",
            x.len(),
            lambda.dim()
        )));
    }
    GoSystem::new(lambda, k).solve(x)
}

/// `W ∈ k` and `[W + X, ΛX] = 0` (within tolerance on the float backend).
pub fn verify_certificate<S: Scalar>(lambda: &MetricOperator<S>, k: &Subspace<S>, cert: &GoCertificate<S>) -> bool {
    let alg = lambda.algebra();
    if cert.direction.len() != alg.dim() || cert.witness.len() != alg.dim() || !k.contains(&cert.witness) {
        return false;
    }
    let lx = lambda.apply(&cert.direction);
    let r = alg.bracket(&vecops::add(&cert.witness, &cert.direction), &lx);
    let scale = vecops::max_abs(&lx).max(1.0) * vecops::max_abs(&cert.direction).max(1.0);
    r.iter().all(|v| v.is_zero_rel(alg.tol().residual_epsilon, scale))
}

/// Recomputes both ranks exactly and checks they match the recorded gap.
pub fn verify_counterexample(
    lambda: &MetricOperator<Rational>,
    k: &Subspace<Rational>,
    ce: &Counterexample<Rational>,
) -> bool {
    if ce.direction.len() != lambda.dim() || ce.rank_ab != ce.rank_a + 1 {
        return false;
    }
    let sys = GoSystem::new(lambda, k);
    let (a, b, _) = sys.system(&ce.direction);
    let tol = lambda.algebra().tol();
    let rank_a = crate::arith::rank(&a, tol);
    let mut cols: Vec<Vec<Rational>> = (0..a.cols()).map(|j| a.column(j)).collect();
    cols.push(b);
    let ab = Matrix::from_columns(&cols, a.rows()).expect("uniform");
    let rank_ab = crate::arith::rank(&ab, tol);
    rank_a == ce.rank_a && rank_ab == ce.rank_ab
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::lie::{embed_so_partition, EmbeddingLayout};
    use crate::metric::{isometry_subalgebra, layout_block_spec, metric_from_blocks};
    use crate::testutil::so;

    fn metric(l: &EmbeddingLayout<Rational>, p: &[i64]) -> MetricOperator<Rational> {
        let p: Vec<Rational> = p.iter().map(|&x| rat(x, 1)).collect();
        metric_from_blocks(&layout_block_spec(l, &p).unwrap()).unwrap()
    }

    #[test]
    fn bi_invariant_has_zero_witness() {
        let g = so(5);
        let op = MetricOperator::scalar(&g, rat(3, 1)).unwrap();
        let x: Vec<Rational> = (0..10).map(|i| rat(i - 4, 1)).collect();
        let k = Subspace::whole(&g);
        match go_solve_at(&op, &k, &x).unwrap() {
            GoSolve::Solved(c) => {
                assert!(vecops::is_zero(&c.witness, 0.0));
                assert!(verify_certificate(&op, &k, &c));
            }
            GoSolve::Unsolvable(_) => panic!("bi-invariant metric must be solvable"),
        }
    }

    #[test]
    fn distinct_parameters_fail_on_mixed_direction() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let op = metric(&l, &[1, 2, 3, 4, 5, 6]);
        let k = l.k();
        let v4 = l.block(0, 1).unwrap().vector(&[rat(1, 1), rat(2, 1), rat(-1, 1), rat(3, 1)]);
        let v5 = l.block(0, 2).unwrap().vector(&[rat(2, 1), rat(-1, 1), rat(1, 1), rat(1, 1)]);
        let x = vecops::add(&v4, &v5);
        match go_solve_at(&op, &k, &x).unwrap() {
            GoSolve::Unsolvable(ce) => {
                assert_eq!(ce.rank_ab, ce.rank_a + 1);
                assert!(verify_counterexample(&op, &k, &ce));
            }
            GoSolve::Solved(_) => panic!("expected a counterexample"),
        }
    }

    #[test]
    fn naturally_reductive_directions_solve() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let op = metric(&l, &[2, 2, 7, 2, 5, 5]);
        let k = isometry_subalgebra(&op).unwrap();
        for seed in 0..10i64 {
            let x: Vec<Rational> = (0..15).map(|i| rat((i * 7 + seed * 3) % 11 - 5, 1)).collect();
            let s = go_solve_at(&op, &k, &x).unwrap();
            let GoSolve::Solved(c) = s else { panic!("unsolvable at seed {seed}") };
            assert!(verify_certificate(&op, &k, &c));
        }
    }

    #[test]
    fn witness_is_minimal() {
        // With k = g and a bi-invariant metric every W in the centralizer of X
        // solves; the minimal one is zero.
        let g = so(4);
        let op = MetricOperator::scalar(&g, rat(1, 1)).unwrap();
        let x = vecops::unit(6, 0);
        let GoSolve::Solved(c) = go_solve_at(&op, &Subspace::whole(&g), &x).unwrap() else { panic!() };
        assert!(vecops::is_zero(&c.witness, 0.0));
    }

    #[test]
    fn non_equivariant_metric_is_rejected() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let op = metric(&l, &[1, 2, 3, 4, 5, 6]);
        let x = vecops::unit(15, 0);
        assert!(matches!(go_solve_at(&op, &Subspace::whole(&g), &x), Err(Error::Precondition(_))));
    }
}
