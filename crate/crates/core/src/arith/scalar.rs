use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::tolerance::ToleranceProfile;
use super::{exact, float};
use crate::error::{Error, Result};

/// Arbitrary-precision rational number used by the exact backend.
pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => write!(f, "exact"),
            Backend::Float => write!(f, "float"),
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(Error::Unsupported(format!("backend `{other}`"))),
        }
    }
}

/// Outcome of `solve_linear`.
#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome<S> {
    Solution {
        x: Vec<S>,
        nullspace: Vec<Vec<S>>,
    },
    /// `b` is outside the column span. On the exact backend `rank_ab = rank_a + 1`
    /// certifies this; on the float backend `residual` is the least-squares max-norm residual.
    Inconsistent {
        rank_a: usize,
        rank_ab: usize,
        residual: f64,
    },
}

impl<S> SolveOutcome<S> {
    pub fn is_solution(&self) -> bool {
        matches!(self, SolveOutcome::Solution { .. })
    }
}

/// A field element for one of the two backends, plus the dense kernels that
/// depend on how zero is decided.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// Exact for rationals (the stored binary fraction), identity for floats.
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact value. Floats convert to the binary fraction they store.
    fn to_rational(&self) -> Rational;
    /// Zero test. `scale` is the magnitude the value should be compared against
    /// (ignored by the exact backend).
    fn is_zero_rel(&self, eps: f64, scale: f64) -> bool;
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    /// Strictly positive, beyond the zero threshold on the float backend.
    fn is_positive(&self, eps: f64, scale: f64) -> bool;

    fn rank(m: &Matrix<Self>, tol: &ToleranceProfile) -> usize;
    /// Basis of `{x : m x = 0}`.
    fn nullspace(m: &Matrix<Self>, tol: &ToleranceProfile) -> Vec<Vec<Self>>;
    /// A linearly independent spanning set of the row space.
    fn row_basis(rows: &[Vec<Self>], cols: usize, tol: &ToleranceProfile) -> Vec<Vec<Self>>;
    fn solve(a: &Matrix<Self>, b: &[Self], tol: &ToleranceProfile) -> Result<SolveOutcome<Self>>;
    fn inverse(m: &Matrix<Self>, tol: &ToleranceProfile) -> Option<Matrix<Self>>;

    fn is_zero_abs(&self, eps: f64) -> bool {
        self.is_zero_rel(eps, 1.0)
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).unwrap_or_else(Zero::zero)
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn is_zero_rel(&self, _eps: f64, _scale: f64) -> bool {
        self.is_zero()
    }
    fn magnitude(&self) -> f64 {
        ratio_to_f64(&self.abs())
    }
    fn is_positive(&self, _eps: f64, _scale: f64) -> bool {
        Signed::is_positive(self)
    }

    fn rank(m: &Matrix<Self>, _tol: &ToleranceProfile) -> usize {
        exact::rank(m)
    }
    fn nullspace(m: &Matrix<Self>, _tol: &ToleranceProfile) -> Vec<Vec<Self>> {
        exact::nullspace(m)
    }
    fn row_basis(rows: &[Vec<Self>], cols: usize, _tol: &ToleranceProfile) -> Vec<Vec<Self>> {
        exact::row_basis(rows, cols)
    }
    fn solve(a: &Matrix<Self>, b: &[Self], _tol: &ToleranceProfile) -> Result<SolveOutcome<Self>> {
        exact::solve(a, b)
    }
    fn inverse(m: &Matrix<Self>, _tol: &ToleranceProfile) -> Option<Matrix<Self>> {
        exact::inverse(m)
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &Rational) -> Self {
        ratio_to_f64(r)
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).unwrap_or_else(Zero::zero)
    }
    fn is_zero_rel(&self, eps: f64, scale: f64) -> bool {
        self.abs() <= eps * scale.max(1.0)
    }
    fn is_positive(&self, eps: f64, scale: f64) -> bool {
        *self > eps * scale.max(1.0)
    }

    fn rank(m: &Matrix<Self>, tol: &ToleranceProfile) -> usize {
        float::rank(m, tol)
    }
    fn nullspace(m: &Matrix<Self>, tol: &ToleranceProfile) -> Vec<Vec<Self>> {
        float::nullspace(m, tol)
    }
    fn row_basis(rows: &[Vec<Self>], cols: usize, tol: &ToleranceProfile) -> Vec<Vec<Self>> {
        float::row_basis(rows, cols, tol)
    }
    fn solve(a: &Matrix<Self>, b: &[Self], tol: &ToleranceProfile) -> Result<SolveOutcome<Self>> {
        float::solve(a, b, tol)
    }
    fn inverse(m: &Matrix<Self>, tol: &ToleranceProfile) -> Option<Matrix<Self>> {
        float::inverse(m, tol)
    }
}

/// Converts a big rational to the nearest-ish double without overflowing on
/// large numerators and denominators.
pub fn ratio_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
    n / d
}

/// Formats a rational as `p/q` (always with a denominator).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Formats a rational as `p` when integral, `p/q` otherwise.
pub fn format_rational_short(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format_rational(r)
    }
}

/// Parses `p`, `p/q` or a decimal literal such as `2.5` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        let frac_part: BigInt = frac.parse().ok()?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = Rational::new(int_part.abs() * &denom + frac_part, denom);
        return Some(if negative { -magnitude } else { magnitude });
    }
    let p: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(p))
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_forms() {
        assert_eq!(parse_rational("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-4"), Some(rat(-4, 1)));
        assert_eq!(parse_rational("2.25"), Some(rat(9, 4)));
        assert_eq!(parse_rational("-0.5"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&rat(2, 1)), "2/1");
        assert_eq!(format_rational_short(&rat(-3, 4)), "-3/4");
    }

    #[test]
    fn float_round_trip_is_exact() {
        let x = 0.1f64;
        assert_eq!(ratio_to_f64(&x.to_rational()), x);
    }

    #[test]
    fn huge_ratio_converts() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let r = Rational::new(big.clone() * 3, big);
        assert!((ratio_to_f64(&r) - 3.0).abs() < 1e-12);
    }
}
