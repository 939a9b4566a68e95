//! Scalar backends and dense linear algebra.

mod eigen;
pub mod exact;
pub mod float;
mod matrix;
mod scalar;
mod tolerance;

pub use eigen::{
    block_eigenspaces, reassemble, is_positive_definite, is_self_adjoint, symmetric_eigenspaces,
    symmetric_eigenspaces_partial, Eigenspace,
};
pub use matrix::{vecops, Matrix};
pub use scalar::{
    format_rational, format_rational_short, parse_rational, rat, ratio_to_f64, Backend, Rational,
    Scalar, SolveOutcome,
};
pub use tolerance::ToleranceProfile;

use crate::error::Result;

/// Solves `a x = b`. See [`SolveOutcome`] for how inconsistency is reported.
pub fn solve_linear<S: Scalar>(
    a: &Matrix<S>,
    b: &[S],
    tol: &ToleranceProfile,
) -> Result<SolveOutcome<S>> {
    S::solve(a, b, tol)
}

pub fn rank<S: Scalar>(a: &Matrix<S>, tol: &ToleranceProfile) -> usize {
    S::rank(a, tol)
}

pub fn nullspace<S: Scalar>(a: &Matrix<S>, tol: &ToleranceProfile) -> Vec<Vec<S>> {
    S::nullspace(a, tol)
}

/// Common nullspace of a sequence of blocks acting on the same unknowns.
///
/// The solution basis is restricted one block at a time, so each elimination
/// only sees as many columns as there are surviving solutions.
pub fn common_nullspace<S: Scalar, I>(unknowns: usize, blocks: I, tol: &ToleranceProfile) -> Vec<Vec<S>>
where
    I: IntoIterator<Item = Matrix<S>>,
{
    // Columns of `basis` span the current solution space; `None` is the identity.
    let mut basis: Option<Matrix<S>> = None;
    for block in blocks {
        if block.rows() == 0 {
            continue;
        }
        let scale = block.max_abs();
        let reduced = match &basis {
            None => block,
            // Solution columns have unit scale, so roundoff in the product is
            // measured against the original block.
            Some(n) => block
                .mul(n)
                .expect("block width matches unknowns")
                .chop(tol.rank_epsilon, scale),
        };
        let coeffs = S::nullspace(&reduced, tol);
        if coeffs.is_empty() {
            return Vec::new();
        }
        let c = Matrix::from_columns(&coeffs, reduced.cols()).expect("uniform lengths");
        basis = Some(match &basis {
            None => c,
            Some(n) => n.mul(&c).expect("shapes agree"),
        });
    }
    match basis {
        None => (0..unknowns).map(|i| vecops::unit(unknowns, i)).collect(),
        Some(n) => (0..n.cols()).map(|j| n.column(j)).collect(),
    }
}
