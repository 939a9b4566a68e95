use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::arith::{format_rational, parse_rational, vecops, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::lie::Algebra;

/// A linear subspace of an algebra, stored as linearly independent coordinate
/// vectors in the ambient basis.
#[derive(Clone)]
pub struct Subspace<S> {
    ambient: Arc<Algebra<S>>,
    basis: Vec<Vec<S>>,
    /// Rows `Q c` for a basis `c` of the Q-orthogonal complement: `v` lies in
    /// the subspace iff every row annihilates it.
    annihilator: OnceLock<Matrix<S>>,
    /// `(B Q B^T)^{-1} B Q`, sending an ambient vector to the coordinates of
    /// its Q-orthogonal projection.
    coord_map: OnceLock<Matrix<S>>,
}

impl<S: fmt::Debug> fmt::Debug for Subspace<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subspace")
            .field("ambient", &self.ambient.name())
            .field("dim", &self.basis.len())
            .field("basis", &self.basis)
            .finish()
    }
}

impl<S: Scalar> Subspace<S> {
    fn raw(ambient: Arc<Algebra<S>>, basis: Vec<Vec<S>>) -> Self {
        Subspace {
            ambient,
            basis,
            annihilator: OnceLock::new(),
            coord_map: OnceLock::new(),
        }
    }

    /// Span of arbitrary vectors; the stored basis is a reduced spanning set.
    pub fn span(ambient: &Arc<Algebra<S>>, vectors: &[Vec<S>]) -> Self {
        let n = ambient.dim();
        let basis = S::row_basis(vectors, n, ambient.tol());
        Self::raw(ambient.clone(), basis)
    }

    /// Keeps the given vectors as the basis; they must be independent.
    pub fn from_basis(ambient: &Arc<Algebra<S>>, vectors: Vec<Vec<S>>) -> Result<Self> {
        let n = ambient.dim();
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in a {n}-dimensional algebra",
                v.len()
            )));
        }
        if !vectors.is_empty() {
            let m = Matrix::from_rows_with_cols(&vectors, n)?;
            if S::rank(&m, ambient.tol()) != vectors.len() {
                return Err(Error::Contract("subspace basis vectors are linearly dependent".into()));
            }
        }
        Ok(Self::raw(ambient.clone(), vectors))
    }

    pub fn zero(ambient: &Arc<Algebra<S>>) -> Self {
        Self::raw(ambient.clone(), Vec::new())
    }

    pub fn whole(ambient: &Arc<Algebra<S>>) -> Self {
        let n = ambient.dim();
        Self::raw(ambient.clone(), (0..n).map(|i| vecops::unit(n, i)).collect())
    }

    /// Span of the given ambient basis vectors.
    pub fn coordinate(ambient: &Arc<Algebra<S>>, indices: &[usize]) -> Self {
        let n = ambient.dim();
        Self::raw(ambient.clone(), indices.iter().map(|&i| vecops::unit(n, i)).collect())
    }

    pub fn ambient(&self) -> &Arc<Algebra<S>> {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    /// Basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn basis_columns(&self) -> Matrix<S> {
        Matrix::from_columns(&self.basis, self.ambient.dim()).expect("uniform lengths")
    }

    pub fn gram(&self) -> Matrix<S> {
        let qb: Vec<Vec<S>> = self
            .basis
            .iter()
            .map(|b| self.ambient.q().mul_vec(b).expect("length"))
            .collect();
        Matrix::from_fn(self.dim(), self.dim(), |i, j| vecops::dot(&self.basis[i], &qb[j]))
    }

    fn annihilator(&self) -> &Matrix<S> {
        self.annihilator.get_or_init(|| {
            let n = self.ambient.dim();
            let comp = self.complement_vectors();
            let rows: Vec<Vec<S>> = comp
                .iter()
                .map(|c| self.ambient.q().mul_vec(c).expect("length"))
                .collect();
            Matrix::from_rows_with_cols(&rows, n).expect("uniform lengths")
        })
    }

    fn coord_map(&self) -> &Matrix<S> {
        self.coord_map.get_or_init(|| {
            let n = self.ambient.dim();
            if self.is_zero() {
                return Matrix::zeros(0, n);
            }
            let b = Matrix::from_rows(&self.basis).expect("uniform lengths");
            let bq = b.mul(self.ambient.q()).expect("shapes");
            let inv = S::inverse(&self.gram(), self.ambient.tol()).expect("Q is definite on every subspace");
            inv.mul(&bq).expect("shapes")
        })
    }

    fn complement_vectors(&self) -> Vec<Vec<S>> {
        let n = self.ambient.dim();
        if self.is_zero() {
            return (0..n).map(|i| vecops::unit(n, i)).collect();
        }
        let b = Matrix::from_rows(&self.basis).expect("uniform lengths");
        let bq = b.mul(self.ambient.q()).expect("shapes");
        S::nullspace(&bq, self.ambient.tol())
    }

    /// The annihilator rows applied to `v`; zero iff `v` is in the subspace.
    pub fn residual(&self, v: &[S]) -> Vec<S> {
        self.annihilator().mul_vec(v).expect("length")
    }

    pub fn contains(&self, v: &[S]) -> bool {
        let r = self.residual(v);
        let scale = vecops::max_abs(v).max(1.0);
        r.iter()
            .all(|x| x.is_zero_rel(self.ambient.tol().residual_epsilon, scale))
    }

    pub fn contains_subspace(&self, other: &Subspace<S>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn same_span(&self, other: &Subspace<S>) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    /// Coordinates of the Q-orthogonal projection of `v`.
    pub fn coordinates(&self, v: &[S]) -> Vec<S> {
        self.coord_map().mul_vec(v).expect("length")
    }

    pub fn vector(&self, coords: &[S]) -> Vec<S> {
        vecops::combine(coords, &self.basis, self.ambient.dim())
    }

    /// Q-orthogonal projection onto the subspace.
    pub fn project(&self, v: &[S]) -> Vec<S> {
        self.vector(&self.coordinates(v))
    }

    /// Q-orthogonal complement in the ambient algebra.
    pub fn orthogonal_complement(&self) -> Subspace<S> {
        Self::raw(self.ambient.clone(), self.complement_vectors())
    }

    /// Orthogonal complement for another symmetric form, which must be
    /// positive definite.
    pub fn orthogonal_complement_for(&self, form: &Matrix<S>) -> Result<Subspace<S>> {
        let n = self.ambient.dim();
        if form.rows() != n || form.cols() != n {
            return Err(Error::DimensionMismatch("form size differs from algebra dimension".into()));
        }
        if !crate::arith::is_positive_definite(form, self.ambient.tol()) {
            return Err(Error::DegenerateForm("complement needs a positive definite form".into()));
        }
        if self.is_zero() {
            return Ok(Subspace::whole(&self.ambient));
        }
        let b = Matrix::from_rows(&self.basis)?;
        let bf = b.mul(form)?;
        Ok(Self::raw(self.ambient.clone(), S::nullspace(&bf, self.ambient.tol())))
    }

    /// Q-orthogonal complement of `self` inside `within` (which must contain it).
    pub fn complement_within(&self, within: &Subspace<S>) -> Subspace<S> {
        if self.is_zero() {
            return within.clone();
        }
        // Coefficients a with Q(sum a_l w_l, s_i) = 0 for all i.
        let rows: Vec<Vec<S>> = self
            .basis
            .iter()
            .map(|s| {
                let qs = self.ambient.q().mul_vec(s).expect("length");
                within.basis.iter().map(|w| vecops::dot(w, &qs)).collect()
            })
            .collect();
        let m = Matrix::from_rows_with_cols(&rows, within.dim()).expect("uniform");
        let coeffs = S::nullspace(&m, self.ambient.tol());
        let vecs: Vec<Vec<S>> = coeffs.iter().map(|c| within.vector(c)).collect();
        Subspace::span(&self.ambient, &vecs)
    }

    pub fn sum(&self, other: &Subspace<S>) -> Subspace<S> {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::span(&self.ambient, &v)
    }

    pub fn intersection(&self, other: &Subspace<S>) -> Subspace<S> {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(&self.ambient);
        }
        // a in other with annihilator(self) * (sum a_l o_l) = 0.
        let ann = self.annihilator();
        if ann.rows() == 0 {
            return other.clone();
        }
        let cols = other.basis_columns();
        let m = ann.mul(&cols).expect("shapes");
        let coeffs = S::nullspace(&m, self.ambient.tol());
        let vecs: Vec<Vec<S>> = coeffs.iter().map(|c| other.vector(c)).collect();
        Subspace::span(&self.ambient, &vecs)
    }

    pub fn is_orthogonal_to(&self, other: &Subspace<S>) -> bool {
        let tol = self.ambient.tol();
        self.basis.iter().all(|a| {
            other
                .basis
                .iter()
                .all(|b| self.ambient.q_inner(a, b).is_zero_abs(tol.residual_epsilon))
        })
    }

    /// Span of all brackets `[a, b]` with `a` in `self`, `b` in `other`.
    pub fn bracket_span(&self, other: &Subspace<S>) -> Subspace<S> {
        let mut vecs = Vec::new();
        for a in &self.basis {
            for b in &other.basis {
                let c = self.ambient.bracket(a, b);
                if !vecops::is_zero(&c, 0.0) {
                    vecs.push(c);
                }
            }
        }
        Subspace::span(&self.ambient, &vecs)
    }

    /// Checks that brackets of basis vectors stay in the span; the witness is
    /// the first offending pair of basis indices.
    pub fn subalgebra_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                if !self.contains(&self.ambient.bracket(&self.basis[i], &self.basis[j])) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_subalgebra(&self) -> bool {
        self.subalgebra_violation().is_none()
    }

    /// `[other, self] ⊆ self`.
    pub fn is_invariant_under(&self, other: &Subspace<S>) -> bool {
        other
            .basis
            .iter()
            .all(|x| self.basis.iter().all(|v| self.contains(&self.ambient.bracket(x, v))))
    }

    pub fn convert<T: Scalar>(&self, ambient: &Arc<Algebra<T>>) -> Subspace<T> {
        Subspace::raw(
            ambient.clone(),
            self.basis
                .iter()
                .map(|v| v.iter().map(|x| T::from_rational(&x.to_rational())).collect())
                .collect(),
        )
    }
}

/// Text form: `dim <d>` followed by one `vec <c_1> ... <c_d>` line per basis
/// vector, coordinates written as `p/q`.
pub fn emit_subspace<S: Scalar>(s: &Subspace<S>) -> String {
    let mut out = format!("dim {}\n", s.ambient().dim());
    for v in s.basis() {
        out.push_str("vec");
        for x in v {
            out.push(' ');
            out.push_str(&format_rational(&x.to_rational()));
        }
        out.push('\n');
    }
    out
}

/// Parses the text form. The vectors are kept as given and must be independent.
pub fn parse_subspace<S: Scalar>(source: &str, ambient: &Arc<Algebra<S>>) -> Result<Subspace<S>> {
    let mut dim = None;
    let mut vecs = Vec::new();
    for (lineno, raw) in source.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut toks = line.split_whitespace();
        let Some(head) = toks.next() else { continue };
        let err = |message: String| Error::Parse {
            line: lineno + 1,
            column: raw.find(head).map_or(1, |c| c + 1),
            message,
        };
        match head {
            "dim" => {
                let d: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err("expected `dim <d>`".into()))?;
                if d != ambient.dim() {
                    return Err(err(format!("subspace lives in dimension {d}, algebra has {}", ambient.dim())));
                }
                dim = Some(d);
            }
            "vec" => {
                let d = dim.ok_or_else(|| err("`vec` before `dim`".into()))?;
                let coords: Option<Vec<S>> = toks.map(|t| parse_rational(t).map(|r| S::from_rational(&r))).collect();
                let coords = coords.ok_or_else(|| err("expected rational coordinates".into()))?;
                if coords.len() != d {
                    return Err(err(format!("expected {d} coordinates, found {}", coords.len())));
                }
                vecs.push(coords);
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    if dim.is_none() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "missing `dim <d>` header".into(),
        });
    }
    Subspace::from_basis(ambient, vecs)
}
