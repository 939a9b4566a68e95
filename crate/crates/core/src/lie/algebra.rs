use std::sync::{Arc, OnceLock};

use super::killing::{ad_invariance_violation, killing_form};
use super::structure::StructureAlgebra;
use crate::arith::{is_positive_definite, vecops, Matrix, Scalar, ToleranceProfile};
use crate::error::{Error, Result};

/// A validated structure algebra together with an ad-invariant inner product
/// `Q` and the tolerance profile every derived computation uses.
#[derive(Debug)]
pub struct Algebra<S> {
    name: String,
    structure: StructureAlgebra<S>,
    q: Matrix<S>,
    tol: ToleranceProfile,
    ads: Vec<Matrix<S>>,
    simple: OnceLock<bool>,
}

impl<S> Algebra<S> {
    pub fn name(&self) -> &str {
        &self.name
    }
}

impl<S: Scalar> Algebra<S> {
    /// Uses `Q = -B`; fails on non-semisimple algebras.
    pub fn with_killing(name: impl Into<String>, structure: StructureAlgebra<S>, tol: ToleranceProfile) -> Result<Arc<Self>> {
        tol.validate()?;
        structure.validate(&tol)?;
        let k = killing_form(&structure, &tol);
        if !k.q_positive_definite {
            return Err(Error::DegenerateForm(
                "negative Killing form is not positive definite; supply an ad-invariant inner product".into(),
            ));
        }
        Ok(Arc::new(Self::assemble(name.into(), structure, k.q, tol)))
    }

    /// Uses a caller-supplied form, which must be symmetric, positive
    /// definite and ad-invariant.
    pub fn with_form(
        name: impl Into<String>,
        structure: StructureAlgebra<S>,
        q: Matrix<S>,
        tol: ToleranceProfile,
    ) -> Result<Arc<Self>> {
        tol.validate()?;
        structure.validate(&tol)?;
        let d = structure.dim();
        if q.rows() != d || q.cols() != d {
            return Err(Error::DimensionMismatch(format!("form is {}x{}, algebra has dimension {d}", q.rows(), q.cols())));
        }
        let scale = q.max_abs();
        for i in 0..d {
            for j in 0..i {
                if !(q.get(i, j).clone() - q.get(j, i).clone()).is_zero_rel(tol.residual_epsilon, scale) {
                    return Err(Error::DegenerateForm(format!("form is not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        if !is_positive_definite(&q, &tol) {
            return Err(Error::DegenerateForm("form is not positive definite".into()));
        }
        if let Some((i, j, k)) = ad_invariance_violation(&structure, &q, &tol) {
            return Err(Error::DegenerateForm(format!(
                "form is not ad-invariant at basis triple ({}, {}, {})",
                i + 1,
                j + 1,
                k + 1
            )));
        }
        Ok(Arc::new(Self::assemble(name.into(), structure, q, tol)))
    }

    fn assemble(name: String, structure: StructureAlgebra<S>, q: Matrix<S>, tol: ToleranceProfile) -> Self {
        let ads = (0..structure.dim()).map(|i| structure.ad_basis(i)).collect();
        Algebra {
            name,
            structure,
            q,
            tol,
            ads,
            simple: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn structure(&self) -> &StructureAlgebra<S> {
        &self.structure
    }

    pub fn q(&self) -> &Matrix<S> {
        &self.q
    }

    pub fn tol(&self) -> &ToleranceProfile {
        &self.tol
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Vec<S> {
        self.structure.bracket(x, y)
    }

    pub fn ad(&self, x: &[S]) -> Matrix<S> {
        self.structure.ad(x)
    }

    pub fn ad_basis(&self, i: usize) -> &Matrix<S> {
        &self.ads[i]
    }

    /// `Q(x, y)`.
    pub fn q_inner(&self, x: &[S], y: &[S]) -> S {
        vecops::dot(x, &self.q.mul_vec(y).expect("vector length matches dimension"))
    }

    pub fn unit(&self, i: usize) -> Vec<S> {
        vecops::unit(self.dim(), i)
    }

    /// Memoised answer to "is this algebra simple", computed on first use.
    pub(crate) fn simple_cache(&self) -> &OnceLock<bool> {
        &self.simple
    }

    /// Same algebra over another backend.
    pub fn convert<T: Scalar>(&self) -> Arc<Algebra<T>> {
        Arc::new(Algebra::assemble(
            self.name.clone(),
            self.structure.convert(),
            self.q.convert(),
            self.tol,
        ))
    }
}
