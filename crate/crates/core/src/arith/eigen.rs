//! Eigenspaces of operators that are self-adjoint for a positive form.
//!
//! The float backend diagonalises `L^T S L^{-T}` where `form = L L^T`. The
//! exact backend uses that float spectrum only as a guide: each cluster's
//! eigenvalue is rationalised by continued fractions and then confirmed by an
//! exact kernel computation.

use std::cmp::Ordering;

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use num_bigint::BigInt;

use super::float::to_dmatrix;
use super::matrix::Matrix;
use super::scalar::{Backend, Rational, Scalar};
use super::tolerance::ToleranceProfile;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenspace<S> {
    pub value: S,
    /// Coordinate vectors spanning the eigenspace.
    pub basis: Vec<Vec<S>>,
}

impl<S> Eigenspace<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `form * op` is symmetric, i.e. `form(op x, y) = form(x, op y)`.
pub fn is_self_adjoint<S: Scalar>(op: &Matrix<S>, form: &Matrix<S>, tol: &ToleranceProfile) -> bool {
    let Ok(g) = form.mul(op) else {
        return false;
    };
    if !g.is_square() {
        return false;
    }
    let scale = g.max_abs();
    (0..g.rows()).all(|i| {
        (0..i).all(|j| (g.get(i, j).clone() - g.get(j, i).clone()).is_zero_rel(tol.residual_epsilon, scale))
    })
}

/// Positive definiteness of a symmetric matrix through the pivots of an
/// `L D L^T` factorisation.
pub fn is_positive_definite<S: Scalar>(m: &Matrix<S>, tol: &ToleranceProfile) -> bool {
    if !m.is_square() {
        return false;
    }
    let n = m.rows();
    let scale = m.max_abs();
    let mut a = m.clone();
    for k in 0..n {
        let d = a.get(k, k).clone();
        if !d.is_positive(tol.rank_epsilon, scale) {
            return false;
        }
        for i in k + 1..n {
            let f = a.get(i, k).clone() / d.clone();
            if f.is_zero_abs(0.0) {
                continue;
            }
            for j in k + 1..n {
                let v = a.get(i, j).clone() - f.clone() * a.get(k, j).clone();
                a.set(i, j, v);
            }
        }
    }
    true
}

/// Groups pre-labelled blocks by equal value. Used for operators built from
/// block parameters, where the spectrum is known without any iteration.
pub fn block_eigenspaces<S: Scalar>(blocks: &[(S, Vec<Vec<S>>)], tol: &ToleranceProfile) -> Vec<Eigenspace<S>> {
    let mut out: Vec<Eigenspace<S>> = Vec::new();
    for (value, basis) in blocks {
        if basis.is_empty() {
            continue;
        }
        let scale = value.magnitude();
        match out
            .iter_mut()
            .find(|e| (e.value.clone() - value.clone()).is_zero_rel(tol.eigen_gap_epsilon, scale))
        {
            Some(e) => e.basis.extend(basis.iter().cloned()),
            None => out.push(Eigenspace {
                value: value.clone(),
                basis: basis.clone(),
            }),
        }
    }
    out.sort_by(|a, b| cmp_scalar(&a.value, &b.value));
    out
}

fn cmp_scalar<S: Scalar>(a: &S, b: &S) -> Ordering {
    match S::BACKEND {
        Backend::Float => a.to_f64().total_cmp(&b.to_f64()),
        Backend::Exact => a.to_rational().cmp(&b.to_rational()),
    }
}

/// All eigenspaces, sorted by eigenvalue.
///
/// Errors with a contract violation when `op` is not self-adjoint for `form`
/// or `form` is not positive definite, and with `NonRationalSpectrum` when the
/// exact backend cannot confirm every eigenvalue as a rational.
pub fn symmetric_eigenspaces<S: Scalar>(
    op: &Matrix<S>,
    form: &Matrix<S>,
    tol: &ToleranceProfile,
) -> Result<Vec<Eigenspace<S>>> {
    let (spaces, complete) = symmetric_eigenspaces_partial(op, form, tol)?;
    if !complete {
        return Err(Error::NonRationalSpectrum);
    }
    Ok(spaces)
}

/// Like [`symmetric_eigenspaces`] but returns whatever the exact backend could
/// confirm, with a flag telling whether the dimensions add up.
pub fn symmetric_eigenspaces_partial<S: Scalar>(
    op: &Matrix<S>,
    form: &Matrix<S>,
    tol: &ToleranceProfile,
) -> Result<(Vec<Eigenspace<S>>, bool)> {
    let n = op.rows();
    if !op.is_square() || form.rows() != n || form.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, form is {}x{}",
            op.rows(),
            op.cols(),
            form.rows(),
            form.cols()
        )));
    }
    if n == 0 {
        return Ok((Vec::new(), true));
    }
    if !is_self_adjoint(op, form, tol) {
        return Err(Error::Contract("operator is not self-adjoint for the form".into()));
    }
    let (values, vectors) = float_spectrum(&op.to_f64(), &form.to_f64())?;
    let clusters = cluster(&values, tol);

    match S::BACKEND {
        Backend::Float => {
            let spaces = clusters
                .into_iter()
                .map(|idx| {
                    let mean = idx.iter().map(|&i| values[i]).sum::<f64>() / idx.len() as f64;
                    Eigenspace {
                        value: S::from_f64(mean),
                        basis: idx
                            .iter()
                            .map(|&i| (0..n).map(|r| S::from_f64(vectors[(r, i)])).collect())
                            .collect(),
                    }
                })
                .collect();
            Ok((spaces, true))
        }
        Backend::Exact => {
            let mut spaces = Vec::new();
            let mut found = 0;
            for idx in clusters {
                let mean = idx.iter().map(|&i| values[i]).sum::<f64>() / idx.len() as f64;
                if let Some(space) = exact_eigenspace(op, mean, idx.len(), tol) {
                    found += space.dim();
                    spaces.push(space);
                }
            }
            Ok((spaces, found == n))
        }
    }
}

/// Eigenvalues and form-orthonormal eigenvectors (as columns).
fn float_spectrum(op: &Matrix<f64>, form: &Matrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let g = to_dmatrix(form);
    let chol = Cholesky::new(g).ok_or_else(|| Error::DegenerateForm("form is not positive definite".into()))?;
    let l = chol.l();
    let l_inv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::DegenerateForm("form is singular".into()))?;
    let l_inv_t = l_inv.transpose();
    let m = l.transpose() * to_dmatrix(op) * &l_inv_t;
    let sym = (&m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let vectors = l_inv_t * eig.eigenvectors;
    Ok((eig.eigenvalues.iter().cloned().collect(), vectors))
}

/// Index groups of nearly equal eigenvalues, in increasing order of value.
fn cluster(values: &[f64], tol: &ToleranceProfile) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let radius = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let gap = tol.eigen_gap_epsilon * radius;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match groups.last_mut() {
            Some(g) if values[i] - values[*g.last().unwrap()] <= gap => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

fn exact_eigenspace<S: Scalar>(op: &Matrix<S>, approx: f64, mult: usize, tol: &ToleranceProfile) -> Option<Eigenspace<S>> {
    let n = op.rows();
    let close = 1e-6 * approx.abs().max(1.0);
    let mut tried = 0;
    for r in convergents(approx, 1_000_000_000) {
        if (crate::arith::ratio_to_f64(&r) - approx).abs() > close {
            continue;
        }
        tried += 1;
        let value = S::from_rational(&r);
        let shifted = op.sub(&Matrix::scalar(n, value.clone())).ok()?;
        let kernel = S::nullspace(&shifted, tol);
        if kernel.len() == mult {
            return Some(Eigenspace { value, basis: kernel });
        }
        if tried >= 4 {
            break;
        }
    }
    None
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
fn convergents(x: f64, max_den: i128) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h_prev, mut h) = (0i128, 1i128);
    let (mut k_prev, mut k) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e18 {
            break;
        }
        let a = a as i128;
        let h_next = a * h + h_prev;
        let k_next = a * k + k_prev;
        if k_next > max_den {
            break;
        }
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        out.push(Rational::new(BigInt::from(h), BigInt::from(k)));
        let frac = rest - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    out
}

/// Reconstructs `sum value * P_value` from eigenspaces, where `P` is the
/// form-orthogonal projector. Used by tests and consistency checks.
pub fn reassemble<S: Scalar>(spaces: &[Eigenspace<S>], form: &Matrix<S>, tol: &ToleranceProfile) -> Option<Matrix<S>> {
    let n = form.rows();
    let mut out = Matrix::zeros(n, n);
    for e in spaces {
        let b = Matrix::from_columns(&e.basis, n).ok()?;
        let gram = b.transpose().mul(form).ok()?.mul(&b).ok()?;
        let inv = S::inverse(&gram, tol)?;
        let proj = b.mul(&inv).ok()?.mul(&b.transpose()).ok()?.mul(form).ok()?;
        out = out.add(&proj.scale(&e.value)).ok()?;
    }
    Some(out)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, vecops};

    fn diag(v: &[i64]) -> Matrix<Rational> {
        Matrix::from_fn(v.len(), v.len(), |i, j| if i == j { rat(v[i], 1) } else { rat(0, 1) })
    }

    #[test]
    fn scalar_operator_has_one_eigenspace() {
        let tol = ToleranceProfile::default();
        let s = diag(&[5, 5, 5, 5]);
        let spaces = symmetric_eigenspaces(&s, &Matrix::identity(4), &tol).unwrap();
        assert_eq!(spaces.len(), 1);
        assert_eq!(spaces[0].value, rat(5, 1));
        assert_eq!(spaces[0].dim(), 4);
    }

    #[test]
    fn diagonal_multiplicities() {
        let tol = ToleranceProfile::default();
        let spaces = symmetric_eigenspaces(&diag(&[1, 1, 2]), &Matrix::identity(3), &tol).unwrap();
        let dims: Vec<usize> = spaces.iter().map(|e| e.dim()).collect();
        assert_eq!(dims, vec![2, 1]);
        let f = symmetric_eigenspaces(&diag(&[1, 1, 2]).to_f64(), &Matrix::identity(3), &tol).unwrap();
        assert_eq!(f.iter().map(|e| e.dim()).collect::<Vec<_>>(), vec![2, 1]);
    }

    #[test]
    fn non_identity_form_and_reassembly() {
        let tol = ToleranceProfile::default();
        // form = diag(1, 2); op self-adjoint means form*op symmetric.
        let form = diag(&[1, 2]);
        let op = Matrix::from_rows(&[vec![rat(1, 1), rat(2, 1)], vec![rat(1, 1), rat(2, 1)]]).unwrap();
        assert!(is_self_adjoint(&op, &form, &tol));
        let spaces = symmetric_eigenspaces(&op, &form, &tol).unwrap();
        assert_eq!(spaces.iter().map(|e| e.value.clone()).collect::<Vec<_>>(), vec![rat(0, 1), rat(3, 1)]);
        assert_eq!(reassemble(&spaces, &form, &tol).unwrap(), op);
    }

    #[test]
    fn irrational_spectrum_is_reported() {
        let tol = ToleranceProfile::default();
        let op = Matrix::from_rows(&[vec![rat(0, 1), rat(2, 1)], vec![rat(2, 1), rat(1, 1)]]).unwrap();
        let res = symmetric_eigenspaces(&op, &Matrix::identity(2), &tol);
        assert_eq!(res, Err(Error::NonRationalSpectrum));
    }

    #[test]
    fn rejects_non_self_adjoint() {
        let tol = ToleranceProfile::default();
        let op = Matrix::from_rows(&[vec![rat(1, 1), rat(1, 1)], vec![rat(0, 1), rat(1, 1)]]).unwrap();
        assert!(matches!(
            symmetric_eigenspaces(&op, &Matrix::identity(2), &tol),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn rational_eigenvalue_recovered() {
        let tol = ToleranceProfile::default();
        let s = Matrix::from_fn(2, 2, |i, j| if i == j { rat(7, 3 + i as i64) } else { rat(0, 1) });
        let spaces = symmetric_eigenspaces(&s, &Matrix::identity(2), &tol).unwrap();
        assert_eq!(spaces[0].value, rat(7, 4));
        assert_eq!(spaces[1].value, rat(7, 3));
    }

    #[test]
    fn positive_definite_pivots() {
        let tol = ToleranceProfile::default();
        assert!(is_positive_definite(&diag(&[1, 2, 3]), &tol));
        assert!(!is_positive_definite(&diag(&[1, 0, 3]), &tol));
        let indefinite = Matrix::from_rows(&[vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(1, 1)]]).unwrap();
        assert!(!is_positive_definite(&indefinite, &tol));
    }

    #[test]
    fn blocks_group_by_value() {
        let tol = ToleranceProfile::default();
        let e = |i| vecops::unit::<Rational>(3, i);
        let spaces = block_eigenspaces(
            &[(rat(2, 1), vec![e(0)]), (rat(1, 1), vec![e(1)]), (rat(2, 1), vec![e(2)])],
            &tol,
        );
        assert_eq!(spaces.len(), 2);
        assert_eq!(spaces[0].value, rat(1, 1));
        assert_eq!(spaces[1].dim(), 2);
    }
}
