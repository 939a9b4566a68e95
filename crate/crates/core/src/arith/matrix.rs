use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Dense row-major matrix over either backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn scalar(n: usize, c: S) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like `from_rows` but fixes the column count (needed when `rows` is empty).
    pub fn from_rows_with_cols(rows: &[Vec<S>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().cloned());
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors (all of length `len`).
    pub fn from_columns(columns: &[Vec<S>], len: usize) -> Result<Self> {
        let mut m = Self::zeros(len, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != len {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has {} entries, expected {len}",
                    c.len()
                )));
            }
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix<S>) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero_abs(0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero_abs(0.0) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if a.is_zero_abs(0.0) || b.is_zero_abs(0.0) {
                        continue;
                    }
                    acc = acc + a.clone() * b.clone();
                }
                acc
            })
            .collect())
    }

    pub fn add(&self, other: &Matrix<S>) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Matrix<S>) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, other: &Matrix<S>, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "shapes {}x{} and {}x{} differ",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Matrix<S>) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    /// Zero test; for floats the threshold is absolute `eps`.
    pub fn is_zero(&self, eps: f64) -> bool {
        self.data.iter().all(|v| v.is_zero_abs(eps))
    }

    /// Replaces entries that are zero relative to `scale` by exact zeros.
    pub fn chop(mut self, eps: f64, scale: f64) -> Self {
        for v in self.data.iter_mut() {
            if !v.is_zero_abs(0.0) && v.is_zero_rel(eps, scale) {
                *v = S::zero();
            }
        }
        self
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix<S>) -> Result<Self> {
        if self.cols != other.cols && self.rows != 0 && other.rows != 0 {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let cols = if self.rows == 0 { other.cols } else { self.cols };
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols,
            data,
        })
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.to_f64()).collect(),
        }
    }

    pub fn convert<T: Scalar>(&self) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| T::from_rational(&v.to_rational())).collect(),
        }
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }
}

/// Vector helpers shared across modules.
pub mod vecops {
    use super::Scalar;

    pub fn zeros<S: Scalar>(n: usize) -> Vec<S> {
        vec![S::zero(); n]
    }

    pub fn unit<S: Scalar>(n: usize, i: usize) -> Vec<S> {
        let mut v = zeros(n);
        v[i] = S::one();
        v
    }

    pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
        a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
    }

    pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
        a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
    }

    pub fn scale<S: Scalar>(a: &[S], c: &S) -> Vec<S> {
        a.iter().map(|x| x.clone() * c.clone()).collect()
    }

    /// `sum_i coeffs[i] * vectors[i]`.
    pub fn combine<S: Scalar>(coeffs: &[S], vectors: &[Vec<S>], len: usize) -> Vec<S> {
        let mut out: Vec<S> = zeros(len);
        for (c, v) in coeffs.iter().zip(vectors) {
            if c.is_zero_abs(0.0) {
                continue;
            }
            for (o, x) in out.iter_mut().zip(v) {
                if !x.is_zero_abs(0.0) {
                    *o = o.clone() + c.clone() * x.clone();
                }
            }
        }
        out
    }

    pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
        let mut acc = S::zero();
        for (x, y) in a.iter().zip(b) {
            if x.is_zero_abs(0.0) || y.is_zero_abs(0.0) {
                continue;
            }
            acc = acc + x.clone() * y.clone();
        }
        acc
    }

    pub fn max_abs<S: Scalar>(a: &[S]) -> f64 {
        a.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    pub fn is_zero<S: Scalar>(a: &[S], eps: f64) -> bool {
        a.iter().all(|v| v.is_zero_abs(eps))
    }
}
