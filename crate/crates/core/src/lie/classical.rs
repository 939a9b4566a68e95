//! Built-in classical families with fixed real bases.
//!
//! * `so(n)`: `A_ij = E_ij - E_ji` for `i < j`, lexicographic order.
//! * `su(n)`: `A_ij` as above, then `S_ij = i(E_ij + E_ji)` for `i < j`, then
//!   `H_k = i(E_kk - E_{k+1,k+1})` for `k < n`.
//! * `sp(n)`: block matrices `[[A, B], [-conj(B), conj(A)]]` with `A` in
//!   `u(n)` and `B` complex symmetric. The `A` part uses `U_ij = E_ij - E_ji`,
//!   `V_ij = i(E_ij + E_ji)` and `D_k = i E_kk`; the `B` part uses
//!   `P_ij = E_ij + E_ji` (`P_kk = E_kk`) and `R_ij = i(E_ij + E_ji)`
//!   (`R_kk = i E_kk`).
//! * `abelian(n)`: zero tensor.
//!
//! Complex matrices are realised as real matrices `[[Re, -Im], [Im, Re]]`.
//! The `su` and `sp` structure constants are read off the realization.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use super::structure::StructureAlgebra;
use crate::arith::{exact, rat, Matrix, Rational, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    So,
    Su,
    Sp,
    Abelian,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::So => "so",
            Family::Su => "su",
            Family::Sp => "sp",
            Family::Abelian => "abelian",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "so" => Ok(Family::So),
            "su" => Ok(Family::Su),
            "sp" => Ok(Family::Sp),
            "abelian" => Ok(Family::Abelian),
            other => Err(Error::Unsupported(format!("algebra family `{other}`"))),
        }
    }
}

/// Position of `A_ij` (0-based, `i < j`) in the `so(n)` basis.
pub fn so_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// The pair `(i, j)` of the `k`-th `so(n)` basis vector.
pub fn so_pair(n: usize, k: usize) -> (usize, usize) {
    let mut k = k;
    for i in 0..n {
        let row = n - i - 1;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
    }
    panic!("so({n}) has no basis vector {k}");
}

pub fn build_classical<S: Scalar>(family: Family, n: usize) -> Result<StructureAlgebra<S>> {
    let exact = match family {
        Family::So => build_so(n)?,
        Family::Su => build_su(n)?,
        Family::Sp => build_sp(n)?,
        Family::Abelian => {
            if n == 0 {
                return Err(Error::Unsupported("abelian(0)".into()));
            }
            StructureAlgebra::abelian(n)
        }
    };
    Ok(exact.convert())
}

fn build_so(n: usize) -> Result<StructureAlgebra<Rational>> {
    if n < 2 {
        return Err(Error::Unsupported(format!("so({n}) needs n >= 2")));
    }
    let dim = n * (n - 1) / 2;
    // Signed basis element A_ab, with A_ba = -A_ab and A_aa = 0.
    let signed = |a: usize, b: usize| -> Option<(usize, i64)> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some((so_index(n, a, b), 1)),
            std::cmp::Ordering::Greater => Some((so_index(n, b, a), -1)),
            std::cmp::Ordering::Equal => None,
        }
    };
    let mut tensor = vec![<Rational as Zero>::zero(); dim * dim * dim];
    for p in 0..dim {
        let (i, j) = so_pair(n, p);
        for q in 0..dim {
            let (k, l) = so_pair(n, q);
            // [A_ij, A_kl] = d_jk A_il - d_jl A_ik - d_ik A_jl + d_il A_jk
            let mut terms = Vec::new();
            if j == k {
                terms.push((i, l, 1));
            }
            if j == l {
                terms.push((i, k, -1));
            }
            if i == k {
                terms.push((j, l, -1));
            }
            if i == l {
                terms.push((j, k, 1));
            }
            for (a, b, s) in terms {
                if let Some((r, sign)) = signed(a, b) {
                    let slot = &mut tensor[(p * dim + q) * dim + r];
                    *slot += rat(s * sign, 1);
                }
            }
        }
    }
    let labels = (0..dim)
        .map(|p| {
            let (i, j) = so_pair(n, p);
            format!("A{}_{}", i + 1, j + 1)
        })
        .collect();
    let mats = (0..dim)
        .map(|p| {
            let (i, j) = so_pair(n, p);
            let mut m = Matrix::zeros(n, n);
            m.set(i, j, rat(1, 1));
            m.set(j, i, rat(-1, 1));
            m
        })
        .collect();
    StructureAlgebra::from_tensor(dim, tensor)
        .with_labels(labels)?
        .with_realization(mats)
}

/// Complex matrix as a pair of rational matrices.
struct Complex {
    re: Matrix<Rational>,
    im: Matrix<Rational>,
}

impl Complex {
    fn zeros(n: usize) -> Self {
        Complex {
            re: Matrix::zeros(n, n),
            im: Matrix::zeros(n, n),
        }
    }

    fn add_re(&mut self, i: usize, j: usize, v: i64) {
        let x = self.re.get(i, j).clone() + rat(v, 1);
        self.re.set(i, j, x);
    }

    fn add_im(&mut self, i: usize, j: usize, v: i64) {
        let x = self.im.get(i, j).clone() + rat(v, 1);
        self.im.set(i, j, x);
    }

    fn realify(&self) -> Matrix<Rational> {
        let n = self.re.rows();
        Matrix::from_fn(2 * n, 2 * n, |r, c| {
            let (bi, i) = (r / n, r % n);
            let (bj, j) = (c / n, c % n);
            match (bi, bj) {
                (0, 0) | (1, 1) => self.re.get(i, j).clone(),
                (0, 1) => -self.im.get(i, j).clone(),
                _ => self.im.get(i, j).clone(),
            }
        })
    }
}

fn build_su(n: usize) -> Result<StructureAlgebra<Rational>> {
    if n < 2 {
        return Err(Error::Unsupported(format!("su({n}) needs n >= 2")));
    }
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut m = Complex::zeros(n);
            m.add_re(i, j, 1);
            m.add_re(j, i, -1);
            mats.push(m.realify());
            labels.push(format!("A{}_{}", i + 1, j + 1));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut m = Complex::zeros(n);
            m.add_im(i, j, 1);
            m.add_im(j, i, 1);
            mats.push(m.realify());
            labels.push(format!("S{}_{}", i + 1, j + 1));
        }
    }
    for k in 0..n - 1 {
        let mut m = Complex::zeros(n);
        m.add_im(k, k, 1);
        m.add_im(k + 1, k + 1, -1);
        mats.push(m.realify());
        labels.push(format!("H{}", k + 1));
    }
    from_realization(mats, labels)
}

fn build_sp(n: usize) -> Result<StructureAlgebra<Rational>> {
    if n < 1 {
        return Err(Error::Unsupported("sp(0)".into()));
    }
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    // A-part contributes A to the top-left and conj(A) to the bottom-right.
    let a_part = |f: &dyn Fn(&mut Complex, usize)| {
        let mut m = Complex::zeros(2 * n);
        f(&mut m, 0);
        m
    };
    for i in 0..n {
        for j in i + 1..n {
            mats.push(
                a_part(&|m, _| {
                    m.add_re(i, j, 1);
                    m.add_re(j, i, -1);
                    m.add_re(n + i, n + j, 1);
                    m.add_re(n + j, n + i, -1);
                })
                .realify(),
            );
            labels.push(format!("U{}_{}", i + 1, j + 1));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            mats.push(
                a_part(&|m, _| {
                    m.add_im(i, j, 1);
                    m.add_im(j, i, 1);
                    m.add_im(n + i, n + j, -1);
                    m.add_im(n + j, n + i, -1);
                })
                .realify(),
            );
            labels.push(format!("V{}_{}", i + 1, j + 1));
        }
    }
    for k in 0..n {
        mats.push(
            a_part(&|m, _| {
                m.add_im(k, k, 1);
                m.add_im(n + k, n + k, -1);
            })
            .realify(),
        );
        labels.push(format!("D{}", k + 1));
    }
    // B-part: B top-right, -conj(B) bottom-left.
    for i in 0..n {
        for j in i..n {
            let mut m = Complex::zeros(2 * n);
            m.add_re(i, n + j, 1);
            m.add_re(n + j, i, -1);
            if i != j {
                m.add_re(j, n + i, 1);
                m.add_re(n + i, j, -1);
            }
            mats.push(m.realify());
            labels.push(format!("P{}_{}", i + 1, j + 1));
        }
    }
    for i in 0..n {
        for j in i..n {
            let mut m = Complex::zeros(2 * n);
            m.add_im(i, n + j, 1);
            m.add_im(n + j, i, 1);
            if i != j {
                m.add_im(j, n + i, 1);
                m.add_im(n + i, j, 1);
            }
            mats.push(m.realify());
            labels.push(format!("R{}_{}", i + 1, j + 1));
        }
    }
    from_realization(mats, labels)
}

/// Reads structure constants off linearly independent matrices closed under
/// commutators. Coordinates are taken on a set of pivot entries and then
/// checked against the full matrix.
pub fn from_realization(mats: Vec<Matrix<Rational>>, labels: Vec<String>) -> Result<StructureAlgebra<Rational>> {
    let dim = mats.len();
    if dim == 0 {
        return Ok(StructureAlgebra::abelian(0));
    }
    let width = mats[0].rows() * mats[0].cols();
    let flat: Vec<Vec<Rational>> = mats.iter().map(|m| m.data().to_vec()).collect();
    let red = exact::rref(flat.clone(), width);
    if red.rank() != dim {
        return Err(Error::Contract("realization matrices are linearly dependent".into()));
    }
    let pivots = red.pivots.clone();
    // sub[r][c] = flat[r][pivots[c]]; coordinates c solve c * sub = target[pivots].
    let sub = Matrix::from_fn(dim, dim, |r, c| flat[r][pivots[c]].clone());
    let inv = exact::inverse(&sub).expect("pivot submatrix is invertible");
    let mut tensor = vec![<Rational as Zero>::zero(); dim * dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let comm = mats[i].commutator(&mats[j])?;
            let target: Vec<Rational> = pivots.iter().map(|&p| comm.data()[p].clone()).collect();
            let coords = inv.transpose().mul_vec(&target)?;
            let mut rebuilt = Matrix::zeros(comm.rows(), comm.cols());
            for (k, c) in coords.iter().enumerate() {
                if !c.is_zero() {
                    rebuilt = rebuilt.add(&mats[k].scale(c))?;
                }
                tensor[(i * dim + j) * dim + k] = c.clone();
            }
            if rebuilt != comm {
                return Err(Error::Realization { i, j });
            }
        }
    }
    StructureAlgebra::from_tensor(dim, tensor)
        .with_labels(labels)?
        .with_realization(mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ToleranceProfile;

    #[test]
    fn so_index_round_trip() {
        for n in 2..8 {
            for k in 0..n * (n - 1) / 2 {
                let (i, j) = so_pair(n, k);
                assert_eq!(so_index(n, i, j), k);
            }
        }
    }

    #[test]
    fn so3_bracket_convention() {
        let g: StructureAlgebra<Rational> = build_classical(Family::So, 3).unwrap();
        assert_eq!(g.dim(), 3);
        // [A12, A23] = A13
        let a12 = so_index(3, 0, 1);
        let a23 = so_index(3, 1, 2);
        let a13 = so_index(3, 0, 2);
        assert_eq!(g.bracket_basis(a12, a23), &[(a13, rat(1, 1))]);
    }

    #[test]
    fn dimensions_and_validity() {
        let tol = ToleranceProfile::default();
        for (fam, n, dim) in [
            (Family::So, 6, 15),
            (Family::Su, 3, 8),
            (Family::Su, 4, 15),
            (Family::Sp, 1, 3),
            (Family::Sp, 2, 10),
            (Family::Abelian, 3, 3),
        ] {
            let g: StructureAlgebra<Rational> = build_classical(fam, n).unwrap();
            assert_eq!(g.dim(), dim, "{fam}({n})");
            g.validate(&tol).unwrap();
        }
        assert!(build_classical::<Rational>(Family::So, 1).is_err());
        assert!("g2".parse::<Family>().is_err());
    }

    #[test]
    fn abelian_has_zero_tensor() {
        let g: StructureAlgebra<Rational> = build_classical(Family::Abelian, 3).unwrap();
        assert!(g.is_abelian());
    }
}
