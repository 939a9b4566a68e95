use serde::Serialize;

use super::solve::{require_equivariant, GoSolve, GoSystem};
use super::verdict::{go_verdict_on, sample_directions, GoOutcome, GoVerdict, SamplingStrategy};
use crate::arith::{solve_linear, vecops, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::metric::{bi_invariance_check, equivariance_check, EquivarianceWitness, MetricOperator, DECOMPOSITION_SEED};
use crate::rep::is_weakly_regular;
use crate::subspace::{ideal_decomposition, normalizer_decomposition, Subspace};

/// Projection onto `m` along `k`, for `g = k ⊕ m`.
struct Projector<S> {
    m_cols: Matrix<S>,
    /// Rows of `[K | M]^{-1}` belonging to `m`.
    m_rows: Matrix<S>,
}

impl<S: Scalar> Projector<S> {
    fn new(k: &Subspace<S>, m: &Subspace<S>) -> Result<Self> {
        let n = k.ambient().dim();
        if k.dim() + m.dim() != n {
            return Err(Error::Precondition(format!(
                "k ({}) and m ({}) do not add up to g ({n})",
                k.dim(),
                m.dim()
            )));
        }
        let mut cols = k.basis().to_vec();
        cols.extend(m.basis().iter().cloned());
        let b = Matrix::from_columns(&cols, n)?;
        let inv = S::inverse(&b, k.ambient().tol())
            .ok_or_else(|| Error::Precondition("k and m intersect".into()))?;
        let rows: Vec<Vec<S>> = (k.dim()..n).map(|i| inv.row(i).to_vec()).collect();
        Ok(Projector {
            m_cols: m.basis_columns(),
            m_rows: Matrix::from_rows_with_cols(&rows, n)?,
        })
    }

    fn project(&self, v: &[S]) -> Vec<S> {
        self.m_cols
            .mul_vec(&self.m_rows.mul_vec(v).expect("length"))
            .expect("length")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NatredReport {
    pub holds: bool,
    /// 1-based `(X1, X2, Y)` basis indices in `m` with nonzero symmetrized form.
    pub witness: Option<(usize, usize, usize)>,
}

/// `<[X, Y]_m, X> = 0` for all `X, Y ∈ m`, checked through its polarization
/// `<[X1, Y]_m, X2> + <[X2, Y]_m, X1>` on basis triples.
pub fn natred_condition_check<S: Scalar>(
    lambda: &MetricOperator<S>,
    k: &Subspace<S>,
    m: &Subspace<S>,
) -> Result<NatredReport> {
    if !m.is_invariant_under(k) {
        return Err(Error::Precondition("[k, m] is not contained in m".into()));
    }
    let alg = lambda.algebra();
    let proj = Projector::new(k, m)?;
    let d = m.dim();
    let basis = m.basis();
    // brackets[a][c] = [X_a, X_c]_m, metric_rows[b] = QΛ X_b.
    let brackets: Vec<Vec<Vec<S>>> = (0..d)
        .map(|a| (0..d).map(|c| proj.project(&alg.bracket(&basis[a], &basis[c]))).collect())
        .collect();
    let gram = lambda.gram();
    let metric_rows: Vec<Vec<S>> = basis.iter().map(|x| gram.transpose().mul_vec(x).expect("length")).collect();
    let eps = alg.tol().residual_epsilon;
    let scale = gram.max_abs();
    for a in 0..d {
        for b in a..d {
            for c in 0..d {
                let s = vecops::dot(&brackets[a][c], &metric_rows[b]) + vecops::dot(&brackets[b][c], &metric_rows[a]);
                if !s.is_zero_rel(eps, scale) {
                    return Ok(NatredReport {
                        holds: false,
                        witness: Some((a + 1, b + 1, c + 1)),
                    });
                }
            }
        }
    }
    Ok(NatredReport {
        holds: true,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizerEquivarianceReport {
    pub holds: bool,
    pub witness: Option<EquivarianceWitness>,
    pub normalizer_dim: usize,
    pub k_semisimple: bool,
    pub k_self_normalizing: bool,
}

/// `Λ` commutes with `ad` of the whole normalizer of `k`.
pub fn normalizer_equivariance_check<S: Scalar>(
    lambda: &MetricOperator<S>,
    k: &Subspace<S>,
) -> Result<NormalizerEquivarianceReport> {
    let nd = normalizer_decomposition(k)?;
    let k_semisimple = ideal_decomposition(k, DECOMPOSITION_SEED)?.center.is_zero();
    let rep = equivariance_check(lambda, &nd.normalizer);
    Ok(NormalizerEquivarianceReport {
        holds: rep.holds,
        witness: rep.witness,
        normalizer_dim: nd.normalizer.dim(),
        k_semisimple,
        k_self_normalizing: nd.centralizer.is_zero(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoStepReport {
    /// `[Z − W, Λ(Z − W)] − Λ[Z, W] = 0`.
    pub two_step_vanishes: bool,
    /// `[W + X, ΛX] = 0` with `X = Z − W`.
    pub coset_vanishes: bool,
    /// The two expressions are the same vector.
    pub identical: bool,
    pub holds: bool,
}

/// Evaluates both forms of the condition for `X = Z − W`.
pub fn two_step_identity_check<S: Scalar>(
    lambda: &MetricOperator<S>,
    k: &Subspace<S>,
    z: &[S],
    w: &[S],
) -> Result<TwoStepReport> {
    require_equivariant(lambda, k)?;
    if !k.contains(w) {
        return Err(Error::Precondition("W is not in k".into()));
    }
    let alg = lambda.algebra();
    let x = vecops::sub(z, w);
    let lx = lambda.apply(&x);
    let two_step = vecops::sub(&alg.bracket(&x, &lx), &lambda.apply(&alg.bracket(z, w)));
    let coset = alg.bracket(&vecops::add(w, &x), &lx);
    let eps = alg.tol().residual_epsilon;
    let scale = lambda.matrix().max_abs() * vecops::max_abs(z).max(vecops::max_abs(w)).max(1.0).powi(2);
    let zero = |v: &[S]| v.iter().all(|c| c.is_zero_rel(eps, scale));
    let two_step_vanishes = zero(&two_step);
    let coset_vanishes = zero(&coset);
    Ok(TwoStepReport {
        two_step_vanishes,
        coset_vanishes,
        identical: zero(&vecops::sub(&two_step, &coset)),
        holds: two_step_vanishes == coset_vanishes,
    })
}

/// Solvability of the geodesic-lemma form `<[W + X, Y]_m, X> = 0` for all
/// `Y ∈ m`, with `W ∈ k` unknown.
fn geodesic_form_solvable<S: Scalar>(
    lambda: &MetricOperator<S>,
    k: &Subspace<S>,
    m: &Subspace<S>,
    proj: &Projector<S>,
    x: &[S],
) -> Result<bool> {
    let alg = lambda.algebra();
    let lx_row = lambda.gram().transpose().mul_vec(x)?;
    let inner = |u: &[S]| vecops::dot(&proj.project(u), &lx_row);
    let a = Matrix::from_fn(m.dim(), k.dim(), |c, j| inner(&alg.bracket(&k.basis()[j], &m.basis()[c])));
    let b: Vec<S> = m.basis().iter().map(|y| -inner(&alg.bracket(x, y))).collect();
    Ok(solve_linear(&a, &b, alg.tol())?.is_solution())
}

#[derive(Clone, Debug)]
pub struct SplitReport<S> {
    pub weakly_regular: bool,
    pub k_semisimple: bool,
    pub k_self_normalizing: bool,
    /// Hypotheses of the splitting theorem hold; otherwise the run is exploratory.
    pub applicable: bool,
    pub preserves_k: bool,
    pub preserves_m: bool,
    pub bi_invariant_on_k: bool,
    /// g.o. verdict of `Λ|_m` on the coset, `X ∈ m`, `W ∈ k`.
    pub coset_verdict: Option<GoVerdict<S>>,
    /// Directions where `[W + X, ΛX] = 0` and the geodesic-lemma form
    /// disagreed on solvability.
    pub form_disagreements: usize,
    pub holds: bool,
}

/// Checks that `Λ = Λ|_k ⊕ Λ|_m` with `Λ|_k` bi-invariant and `Λ|_m`
/// geodesic orbit on the coset.
pub fn split_check<S: Scalar>(
    lambda: &MetricOperator<S>,
    k: &Subspace<S>,
    strategy: &SamplingStrategy,
) -> Result<SplitReport<S>> {
    let wr = is_weakly_regular(k)?;
    let nd = normalizer_decomposition(k)?;
    let k_semisimple = ideal_decomposition(k, DECOMPOSITION_SEED)?.center.is_zero();
    let k_self_normalizing = nd.centralizer.is_zero();
    let m = nd.complement;
    let preserves_k = lambda.preserves(k);
    let preserves_m = lambda.preserves(&m);
    let bi_invariant_on_k = preserves_k && bi_invariance_check(lambda, k)?;
    let mut report = SplitReport {
        weakly_regular: wr.weakly_regular,
        k_semisimple,
        k_self_normalizing,
        applicable: wr.weakly_regular && (k_semisimple || k_self_normalizing),
        preserves_k,
        preserves_m,
        bi_invariant_on_k,
        coset_verdict: None,
        form_disagreements: 0,
        holds: false,
    };
    if !(preserves_k && preserves_m && equivariance_check(lambda, k).holds) {
        return Ok(report);
    }
    let verdict = go_verdict_on(lambda, k, &m, strategy)?;
    let proj = Projector::new(k, &m)?;
    let checked = match &verdict.outcome {
        GoOutcome::NotDisproved { sample_count, .. } => *sample_count,
        GoOutcome::Disproved { sample_index, .. } | GoOutcome::Suspected { sample_index, .. } => sample_index + 1,
    };
    let system = GoSystem::new(lambda, k);
    for x in sample_directions(lambda, &m, strategy).iter().take(checked) {
        let literal = matches!(system.solve(x)?, GoSolve::Solved(_));
        if literal != geodesic_form_solvable(lambda, k, &m, &proj, x)? {
            report.form_disagreements += 1;
        }
    }
    report.holds = bi_invariant_on_k && verdict.is_not_disproved();
    report.coset_verdict = Some(verdict);
    Ok(report)
}
