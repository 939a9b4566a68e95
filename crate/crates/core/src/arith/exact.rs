//! Exact kernels over big rationals: reduced row echelon form and everything
//! derived from it.

use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::scalar::{Rational, SolveOutcome};
use crate::error::{Error, Result};

/// Reduced row echelon form: nonzero rows only, with the pivot column of each.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

fn nnz(row: &[Rational]) -> usize {
    row.iter().filter(|v| !v.is_zero()).count()
}

/// Gauss-Jordan elimination. Among eligible pivot rows the sparsest is chosen
/// to limit fill-in.
pub fn rref(mut rows: Vec<Vec<Rational>>, cols: usize) -> Rref {
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| nnz(&rows[i]))
        else {
            continue;
        };
        rows.swap(r, p);
        let mut pivot_row = std::mem::take(&mut rows[r]);
        let inv = pivot_row[c].recip();
        if !inv.is_one() {
            for v in pivot_row[c..].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let support: Vec<usize> = (c..cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row.is_empty() {
                continue;
            }
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &support {
                let delta = &f * &pivot_row[j];
                row[j] -= delta;
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Rref { rows, pivots, cols }
}

/// Forward elimination only; enough to count the rank.
pub fn rank_of_rows(mut rows: Vec<Vec<Rational>>, cols: usize) -> usize {
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| nnz(&rows[i]))
        else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = std::mem::take(&mut rows[r]);
        let inv = pivot_row[c].recip();
        let support: Vec<usize> = (c..cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for row in rows.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] * &inv;
            for &j in &support {
                let delta = &f * &pivot_row[j];
                row[j] -= delta;
            }
        }
        rows[r] = pivot_row;
        r += 1;
    }
    r
}

pub fn rank(m: &Matrix<Rational>) -> usize {
    rank_of_rows(m.row_vecs(), m.cols())
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the solution space of the homogeneous system.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in self.pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (r, &pc) in self.pivots.iter().enumerate() {
                let e = &self.rows[r][free];
                if !e.is_zero() {
                    v[pc] = -e.clone();
                }
            }
            basis.push(v);
        }
        basis
    }
}

pub fn nullspace(m: &Matrix<Rational>) -> Vec<Vec<Rational>> {
    rref(m.row_vecs(), m.cols()).nullspace()
}

pub fn row_basis(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    rref(rows.to_vec(), cols).rows
}

pub fn solve(a: &Matrix<Rational>, b: &[Rational]) -> Result<SolveOutcome<Rational>> {
    if a.rows() != b.len() {
        return Err(Error::Contract(format!(
            "solve_linear: matrix has {} rows but right-hand side has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let n = a.cols();
    let aug: Vec<Vec<Rational>> = (0..a.rows())
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let red = rref(aug, n + 1);
    if red.pivots.last() == Some(&n) {
        let rank_ab = red.rank();
        return Ok(SolveOutcome::Inconsistent {
            rank_a: rank_ab - 1,
            rank_ab,
            residual: f64::INFINITY,
        });
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &pc) in red.pivots.iter().enumerate() {
        x[pc] = red.rows[r][n].clone();
    }
    let homogeneous = Rref {
        rows: red.rows.iter().map(|r| r[..n].to_vec()).collect(),
        pivots: red.pivots.clone(),
        cols: n,
    };
    Ok(SolveOutcome::Solution {
        x,
        nullspace: homogeneous.nullspace(),
    })
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse(m: &Matrix<Rational>) -> Option<Matrix<Rational>> {
    let n = m.rows();
    if !m.is_square() {
        return None;
    }
    let aug: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let red = rref(aug, 2 * n);
    if red.rank() < n || red.pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    let rows: Vec<Vec<Rational>> = red.rows.iter().map(|r| r[n..].to_vec()).collect();
    Matrix::from_rows(&rows).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::scalar::rat;

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&v| rat(v, 1)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::identity(4)), 4);
        assert_eq!(rank(&Matrix::zeros(3, 5)), 0);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(3));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }
}
