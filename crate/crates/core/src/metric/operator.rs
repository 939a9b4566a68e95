use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arith::{
    is_positive_definite, is_self_adjoint, symmetric_eigenspaces_partial, vecops, Eigenspace, Matrix, Scalar,
};
use crate::error::{Error, Result};
use crate::lie::Algebra;
use crate::subspace::Subspace;

/// A Q-self-adjoint, positive-definite operator `Λ` with
/// `<X, Y> = Q(ΛX, Y)`. Operators act on coordinate columns.
#[derive(Clone, Debug)]
pub struct MetricOperator<S> {
    algebra: Arc<Algebra<S>>,
    matrix: Matrix<S>,
    /// Known spectral blocks, when built from block parameters.
    blocks: Option<Vec<Eigenspace<S>>>,
    eigenspaces: OnceLock<(Vec<Eigenspace<S>>, bool)>,
}

impl<S: Scalar> MetricOperator<S> {
    pub fn new(algebra: &Arc<Algebra<S>>, matrix: Matrix<S>) -> Result<Self> {
        let n = algebra.dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "metric operator is {}x{}, algebra has dimension {n}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let tol = algebra.tol();
        if !is_self_adjoint(&matrix, algebra.q(), tol) {
            return Err(Error::Contract("metric operator is not Q-self-adjoint".into()));
        }
        let gram = algebra.q().mul(&matrix)?;
        if !is_positive_definite(&gram, tol) {
            return Err(Error::Contract("metric operator is not positive definite".into()));
        }
        Ok(MetricOperator {
            algebra: algebra.clone(),
            matrix,
            blocks: None,
            eigenspaces: OnceLock::new(),
        })
    }

    /// `c · Id`, a bi-invariant metric.
    pub fn scalar(algebra: &Arc<Algebra<S>>, c: S) -> Result<Self> {
        let n = algebra.dim();
        let mut op = Self::new(algebra, Matrix::scalar(n, c.clone()))?;
        op.blocks = Some(vec![Eigenspace {
            value: c,
            basis: (0..n).map(|i| vecops::unit(n, i)).collect(),
        }]);
        Ok(op)
    }

    pub(crate) fn with_blocks(mut self, blocks: Vec<Eigenspace<S>>) -> Self {
        self.blocks = Some(blocks);
        self
    }

    pub fn algebra(&self) -> &Arc<Algebra<S>> {
        &self.algebra
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        self.matrix.mul_vec(x).expect("length")
    }

    /// `<x, y> = Q(Λx, y)`.
    pub fn inner(&self, x: &[S], y: &[S]) -> S {
        self.algebra.q_inner(&self.apply(x), y)
    }

    /// Gram matrix `QΛ` of the metric in the algebra basis.
    pub fn gram(&self) -> Matrix<S> {
        self.algebra.q().mul(&self.matrix).expect("shapes")
    }

    /// Eigenspaces sorted by eigenvalue, plus whether they fill the algebra
    /// (always on the float backend and for block-built operators).
    pub fn eigenspaces(&self) -> &(Vec<Eigenspace<S>>, bool) {
        self.eigenspaces.get_or_init(|| {
            if let Some(b) = &self.blocks {
                return (b.clone(), true);
            }
            symmetric_eigenspaces_partial(&self.matrix, self.algebra.q(), self.algebra.tol())
                .unwrap_or((Vec::new(), false))
        })
    }

    /// `Λ sub ⊆ sub`.
    pub fn preserves(&self, sub: &Subspace<S>) -> bool {
        sub.basis().iter().all(|v| sub.contains(&self.apply(v)))
    }

    /// Matrix of `Λ|_sub` in the basis of `sub`; the subspace must be invariant.
    pub fn restricted(&self, sub: &Subspace<S>) -> Result<Matrix<S>> {
        if !self.preserves(sub) {
            return Err(Error::Contract("metric operator does not preserve the subspace".into()));
        }
        let cols: Vec<Vec<S>> = sub.basis().iter().map(|v| sub.coordinates(&self.apply(v))).collect();
        Matrix::from_columns(&cols, sub.dim())
    }

    /// `Λ|_sub = c · Id` for some `c`, returned.
    pub fn scalar_on(&self, sub: &Subspace<S>) -> Option<S> {
        let first = sub.basis().first()?;
        let lam = rayleigh(&self.algebra, &self.apply(first), first);
        let eps = self.algebra.tol().residual_epsilon;
        let scale = self.matrix.max_abs();
        sub.basis()
            .iter()
            .all(|v| {
                let d = vecops::sub(&self.apply(v), &vecops::scale(v, &lam));
                d.iter().all(|x| x.is_zero_rel(eps, scale))
            })
            .then_some(lam)
    }

    pub fn scaled(&self, c: &S) -> Result<Self> {
        let mut out = Self::new(&self.algebra, self.matrix.scale(c))?;
        out.blocks = self.blocks.as_ref().map(|bs| {
            bs.iter()
                .map(|e| Eigenspace {
                    value: e.value.clone() * c.clone(),
                    basis: e.basis.clone(),
                })
                .collect()
        });
        Ok(out)
    }

    pub fn convert<T: Scalar>(&self, algebra: &Arc<Algebra<T>>) -> Result<MetricOperator<T>> {
        let mut out = MetricOperator::new(algebra, self.matrix.convert())?;
        out.blocks = self.blocks.as_ref().map(|bs| {
            bs.iter()
                .map(|e| Eigenspace {
                    value: T::from_rational(&e.value.to_rational()),
                    basis: e.basis.iter().map(|v| v.iter().map(|x| T::from_rational(&x.to_rational())).collect()).collect(),
                })
                .collect()
        });
        Ok(out)
    }
}

/// `Q(w, v) / Q(v, v)`.
fn rayleigh<S: Scalar>(alg: &Algebra<S>, w: &[S], v: &[S]) -> S {
    alg.q_inner(w, v) / alg.q_inner(v, v)
}

/// First basis vector of `h` whose `ad` does not commute with `Λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivarianceWitness {
    /// 1-based index into the basis of `h`.
    pub index: usize,
    /// Max-norm of `[ad_X, Λ]`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivarianceReport {
    pub holds: bool,
    pub witness: Option<EquivarianceWitness>,
}

/// `ad_X ∘ Λ = Λ ∘ ad_X` for every basis vector `X` of `h`.
pub fn equivariance_check<S: Scalar>(lambda: &MetricOperator<S>, h: &Subspace<S>) -> EquivarianceReport {
    let alg = lambda.algebra();
    let eps = alg.tol().residual_epsilon;
    let scale = lambda.matrix().max_abs();
    for (i, x) in h.basis().iter().enumerate() {
        let ad = alg.ad(x);
        let c = ad.commutator(lambda.matrix()).expect("shapes");
        if !c.data().iter().all(|v| v.is_zero_rel(eps, scale * vecops::max_abs(x).max(1.0))) {
            return EquivarianceReport {
                holds: false,
                witness: Some(EquivarianceWitness {
                    index: i + 1,
                    residual: c.max_abs(),
                }),
            };
        }
    }
    EquivarianceReport {
        holds: true,
        witness: None,
    }
}
