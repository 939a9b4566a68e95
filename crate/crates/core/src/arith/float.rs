//! Floating-point kernels. Every zero decision is an SVD threshold taken from
//! the tolerance profile.

use nalgebra::{DMatrix, DVector};

use super::matrix::Matrix;
use super::scalar::SolveOutcome;
use super::tolerance::ToleranceProfile;
use crate::error::{Error, Result};

pub(crate) fn to_dmatrix(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

/// Pads with zero rows so that the SVD returns a full right-singular basis.
fn padded(m: &Matrix<f64>) -> DMatrix<f64> {
    let rows = m.rows().max(m.cols());
    let mut d = DMatrix::zeros(rows, m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            d[(i, j)] = *m.get(i, j);
        }
    }
    d
}

fn threshold(sv: &DVector<f64>, tol: &ToleranceProfile) -> f64 {
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    tol.rank_epsilon * smax.max(f64::MIN_POSITIVE)
}

pub fn rank(m: &Matrix<f64>, tol: &ToleranceProfile) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let sv = to_dmatrix(m).singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    let t = threshold(&sv, tol);
    sv.iter().filter(|&&s| s > t).count()
}

pub fn nullspace(m: &Matrix<f64>, tol: &ToleranceProfile) -> Vec<Vec<f64>> {
    let n = m.cols();
    if n == 0 {
        return Vec::new();
    }
    if m.rows() == 0 || m.max_abs() == 0.0 {
        return (0..n)
            .map(|i| {
                let mut v = vec![0.0; n];
                v[i] = 1.0;
                v
            })
            .collect();
    }
    let svd = padded(m).svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let t = threshold(&svd.singular_values, tol);
    let mut out = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= t {
            out.push(v_t.row(i).iter().cloned().collect());
        }
    }
    out
}

pub fn row_basis(rows: &[Vec<f64>], cols: usize, tol: &ToleranceProfile) -> Vec<Vec<f64>> {
    if rows.is_empty() || cols == 0 {
        return Vec::new();
    }
    let m = match Matrix::from_rows_with_cols(rows, cols) {
        Ok(m) => m,
        Err(_) => return Vec::new(),
    };
    if m.max_abs() == 0.0 {
        return Vec::new();
    }
    let svd = padded(&m).svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let t = threshold(&svd.singular_values, tol);
    let mut idx: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > t)
        .collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    idx.into_iter()
        .map(|i| v_t.row(i).iter().cloned().collect())
        .collect()
}

pub fn solve(a: &Matrix<f64>, b: &[f64], tol: &ToleranceProfile) -> Result<SolveOutcome<f64>> {
    if a.rows() != b.len() {
        return Err(Error::Contract(format!(
            "solve_linear: matrix has {} rows but right-hand side has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let n = a.cols();
    if n == 0 {
        let residual = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        return Ok(if residual > tol.residual_epsilon {
            SolveOutcome::Inconsistent {
                rank_a: 0,
                rank_ab: 1,
                residual,
            }
        } else {
            SolveOutcome::Solution {
                x: Vec::new(),
                nullspace: Vec::new(),
            }
        });
    }
    let ns = nullspace(a, tol);
    let rank_a = n - ns.len();
    let x: Vec<f64> = if a.rows() == 0 || a.max_abs() == 0.0 {
        vec![0.0; n]
    } else {
        let svd = to_dmatrix(a).svd(true, true);
        let t = threshold(&svd.singular_values, tol);
        let rhs = DVector::from_column_slice(b);
        match svd.solve(&rhs, t) {
            Ok(x) => x.iter().cloned().collect(),
            Err(e) => return Err(Error::Contract(format!("least squares failed: {e}"))),
        }
    };
    let ax = a.mul_vec(&x)?;
    let residual = ax
        .iter()
        .zip(b)
        .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
    if residual > tol.residual_epsilon {
        return Ok(SolveOutcome::Inconsistent {
            rank_a,
            rank_ab: rank_a + 1,
            residual,
        });
    }
    Ok(SolveOutcome::Solution { x, nullspace: ns })
}

pub fn inverse(m: &Matrix<f64>, tol: &ToleranceProfile) -> Option<Matrix<f64>> {
    if !m.is_square() || rank(m, tol) < m.rows() {
        return None;
    }
    let inv = to_dmatrix(m).try_inverse()?;
    Some(Matrix::from_fn(m.rows(), m.cols(), |i, j| inv[(i, j)]))
}
