use crate::arith::{vecops, Matrix, Scalar, ToleranceProfile};
use crate::error::{Error, Result};

/// A real Lie algebra given by structure constants:
/// `[e_i, e_j] = sum_k c[i][j][k] e_k`.
///
/// Vectors are coordinate vectors in the basis `e_1, ..., e_d`; operators act
/// on column vectors, so `ad(x)` has `[x, e_j]` as its `j`-th column.
#[derive(Clone, Debug)]
pub struct StructureAlgebra<S> {
    dim: usize,
    tensor: Vec<S>,
    /// Nonzero `(k, c[i][j][k])` for each `i * dim + j`.
    sparse: Vec<Vec<(usize, S)>>,
    labels: Vec<String>,
    realization: Option<Vec<Matrix<S>>>,
}

impl<S: Scalar> StructureAlgebra<S> {
    /// Builds from nonzero entries `(i, j, k, value)` (0-based) without
    /// filling in antisymmetric partners and without validating.
    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, usize, usize, S)>) -> Result<Self> {
        let mut tensor = vec![S::zero(); dim * dim * dim];
        for (i, j, k, v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::DimensionMismatch(format!(
                    "structure constant index ({}, {}, {}) exceeds dimension {dim}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            tensor[(i * dim + j) * dim + k] = v;
        }
        Ok(Self::from_tensor(dim, tensor))
    }

    pub fn from_tensor(dim: usize, tensor: Vec<S>) -> Self {
        assert_eq!(tensor.len(), dim * dim * dim, "tensor length must be dim^3");
        let sparse = (0..dim * dim)
            .map(|ij| {
                (0..dim)
                    .filter_map(|k| {
                        let v = &tensor[ij * dim + k];
                        (!v.is_zero_abs(0.0)).then(|| (k, v.clone()))
                    })
                    .collect()
            })
            .collect();
        StructureAlgebra {
            dim,
            tensor,
            sparse,
            labels: (1..=dim).map(|i| format!("e{i}")).collect(),
            realization: None,
        }
    }

    pub fn abelian(dim: usize) -> Self {
        Self::from_tensor(dim, vec![S::zero(); dim * dim * dim])
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for a {}-dimensional algebra",
                labels.len(),
                self.dim
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Attaches matrices `R_i` that should satisfy `[R_i, R_j] = sum_k c[i][j][k] R_k`.
    pub fn with_realization(mut self, mats: Vec<Matrix<S>>) -> Result<Self> {
        if mats.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} realization matrices for a {}-dimensional algebra",
                mats.len(),
                self.dim
            )));
        }
        self.realization = Some(mats);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn realization(&self) -> Option<&[Matrix<S>]> {
        self.realization.as_deref()
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &S {
        &self.tensor[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero components of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, S)] {
        &self.sparse[i * self.dim + j]
    }

    /// Nonzero entries `(i, j, k, c)` in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &S)> + '_ {
        let d = self.dim;
        (0..d * d).flat_map(move |ij| self.sparse[ij].iter().map(move |(k, v)| (ij / d, ij % d, *k, v)))
    }

    pub fn is_abelian(&self) -> bool {
        self.sparse.iter().all(|s| s.is_empty())
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out: Vec<S> = vecops::zeros(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero_abs(0.0) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero_abs(0.0) {
                    continue;
                }
                let s = &self.sparse[i * self.dim + j];
                if s.is_empty() {
                    continue;
                }
                let f = xi.clone() * yj.clone();
                for (k, c) in s {
                    out[*k] = out[*k].clone() + f.clone() * c.clone();
                }
            }
        }
        out
    }

    /// Matrix of `ad_x`.
    pub fn ad(&self, x: &[S]) -> Matrix<S> {
        let d = self.dim;
        let mut m: Matrix<S> = Matrix::zeros(d, d);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero_abs(0.0) {
                continue;
            }
            for j in 0..d {
                for (k, c) in &self.sparse[i * d + j] {
                    let v = m.get(*k, j).clone() + xi.clone() * c.clone();
                    m.set(*k, j, v);
                }
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> Matrix<S> {
        self.ad(&vecops::unit(self.dim, i))
    }

    /// Checks antisymmetry, the Jacobi identity and, when present, the
    /// realization. Reports the first failing index tuple (0-based).
    pub fn validate(&self, tol: &ToleranceProfile) -> Result<()> {
        self.check_antisymmetry(tol)?;
        self.check_jacobi(tol)?;
        self.check_realization(tol)
    }

    pub fn check_antisymmetry(&self, tol: &ToleranceProfile) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in i..d {
                for k in 0..d {
                    let s = self.constant(i, j, k).clone() + self.constant(j, i, k).clone();
                    if !s.is_zero_abs(tol.residual_epsilon) {
                        return Err(Error::Antisymmetry { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// Jacobi on all triples. Once antisymmetry holds the Jacobiator is
    /// alternating, so `i < j < k` covers every quadruple.
    pub fn check_jacobi(&self, tol: &ToleranceProfile) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let jac = self.jacobiator(i, j, k);
                    if let Some(l) = jac.iter().position(|v| !v.is_zero_abs(tol.residual_epsilon)) {
                        return Err(Error::Jacobi { i, j, k, l });
                    }
                }
            }
        }
        Ok(())
    }

    /// `[[e_i, e_j], e_k] + [[e_j, e_k], e_i] + [[e_k, e_i], e_j]`.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<S> {
        let d = self.dim;
        let mut out: Vec<S> = vecops::zeros(d);
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for (m, cm) in &self.sparse[a * d + b] {
                for (l, cl) in &self.sparse[m * d + c] {
                    out[*l] = out[*l].clone() + cm.clone() * cl.clone();
                }
            }
        }
        out
    }

    pub fn check_realization(&self, tol: &ToleranceProfile) -> Result<()> {
        let Some(mats) = &self.realization else {
            return Ok(());
        };
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let lhs = mats[i].commutator(&mats[j])?;
                let mut rhs = Matrix::zeros(lhs.rows(), lhs.cols());
                for (k, c) in self.bracket_basis(i, j) {
                    rhs = rhs.add(&mats[*k].scale(c))?;
                }
                if !lhs.sub(&rhs)?.is_zero(tol.residual_epsilon) {
                    return Err(Error::Realization { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn convert<T: Scalar>(&self) -> StructureAlgebra<T> {
        let mut out = StructureAlgebra::from_tensor(
            self.dim,
            self.tensor.iter().map(|v| T::from_rational(&v.to_rational())).collect(),
        );
        out.labels = self.labels.clone();
        out.realization = self
            .realization
            .as_ref()
            .map(|ms| ms.iter().map(|m| m.convert()).collect());
        out
    }

    /// Structure tensor of the subalgebra spanned by `basis`, in that basis.
    /// `coords` must map an ambient vector in the span to its coordinates.
    pub fn restricted(&self, basis: &[Vec<S>], coords: impl Fn(&[S]) -> Vec<S>) -> StructureAlgebra<S> {
        let r = basis.len();
        let mut tensor = vec![S::zero(); r * r * r];
        for i in 0..r {
            for j in 0..r {
                let c = coords(&self.bracket(&basis[i], &basis[j]));
                for (k, v) in c.into_iter().enumerate() {
                    tensor[(i * r + j) * r + k] = v;
                }
            }
        }
        StructureAlgebra::from_tensor(r, tensor)
    }
}

impl<S: Scalar> PartialEq for StructureAlgebra<S> {
    /// Tensor equality; labels and realizations are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.tensor == other.tensor
    }
}

/// Block-diagonal sum; brackets between different summands vanish.
pub fn direct_sum<S: Scalar>(parts: &[StructureAlgebra<S>]) -> StructureAlgebra<S> {
    let dim: usize = parts.iter().map(|p| p.dim).sum();
    let mut entries = Vec::new();
    let mut offset = 0;
    for p in parts {
        for (i, j, k, v) in p.entries() {
            entries.push((i + offset, j + offset, k + offset, v.clone()));
        }
        offset += p.dim;
    }
    let mut out = StructureAlgebra::from_entries(dim, entries).expect("indices in range");

    let mut labels: Vec<String> = parts.iter().flat_map(|p| p.labels.iter().cloned()).collect();
    let mut sorted = labels.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != labels.len() {
        labels = parts
            .iter()
            .enumerate()
            .flat_map(|(s, p)| p.labels.iter().map(move |l| format!("s{}.{l}", s + 1)))
            .collect();
    }
    out.labels = labels;

    if parts.iter().all(|p| p.realization.is_some()) {
        let sizes: Vec<usize> = parts
            .iter()
            .map(|p| p.realization.as_ref().unwrap().first().map_or(0, |m| m.rows()))
            .collect();
        let total: usize = sizes.iter().sum();
        let mut mats = Vec::with_capacity(dim);
        let mut shift = 0;
        for (p, size) in parts.iter().zip(&sizes) {
            for m in p.realization.as_ref().unwrap() {
                let mut big = Matrix::zeros(total, total);
                for r in 0..*size {
                    for c in 0..*size {
                        big.set(shift + r, shift + c, m.get(r, c).clone());
                    }
                }
                mats.push(big);
            }
            shift += size;
        }
        out.realization = Some(mats);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Rational};

    fn so3() -> StructureAlgebra<Rational> {
        // e1 = A12, e2 = A13, e3 = A23.
        let one = rat(1, 1);
        let m1 = rat(-1, 1);
        StructureAlgebra::from_entries(
            3,
            vec![
                (0, 1, 2, m1.clone()),
                (1, 0, 2, one.clone()),
                (0, 2, 1, one.clone()),
                (2, 0, 1, m1.clone()),
                (1, 2, 0, m1.clone()),
                (2, 1, 0, one),
            ],
        )
        .unwrap()
    }

    #[test]
    fn ad_matches_bracket() {
        let g = so3();
        let x = vec![rat(1, 1), rat(2, 1), rat(-3, 2)];
        let ad = g.ad(&x);
        for j in 0..3 {
            let e = vecops::unit(3, j);
            assert_eq!(ad.mul_vec(&e).unwrap(), g.bracket(&x, &e));
        }
    }

    #[test]
    fn missing_partner_fails_antisymmetry() {
        let tol = ToleranceProfile::default();
        let g = StructureAlgebra::from_entries(3, vec![(0, 1, 2, rat(1, 1))]).unwrap();
        assert_eq!(g.validate(&tol), Err(Error::Antisymmetry { i: 0, j: 1, k: 2 }));
        assert!(so3().validate(&tol).is_ok());
    }

    #[test]
    fn broken_jacobi_is_located() {
        let tol = ToleranceProfile::default();
        // [e1,e2] = e3, [e1,e3] = e1: antisymmetric but not a Lie algebra.
        let g = StructureAlgebra::from_entries(
            3,
            vec![
                (0, 1, 2, rat(1, 1)),
                (1, 0, 2, rat(-1, 1)),
                (0, 2, 0, rat(1, 1)),
                (2, 0, 0, rat(-1, 1)),
            ],
        )
        .unwrap();
        assert!(matches!(g.validate(&tol), Err(Error::Jacobi { .. })));
    }

    #[test]
    fn direct_sum_commutes() {
        let g = direct_sum(&[so3(), so3()]);
        assert_eq!(g.dim(), 6);
        for i in 0..3 {
            for j in 3..6 {
                assert!(g.bracket_basis(i, j).is_empty());
            }
        }
        assert!(g.validate(&ToleranceProfile::default()).is_ok());
        assert_eq!(g.labels()[3], "s2.e1");
    }
}
