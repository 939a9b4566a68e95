//! Verification of geodesic-orbit and naturally reductive left-invariant
//! metrics on compact Lie algebras given by structure constants.
//!
//! Every computation runs over one of two scalar backends: exact big
//! rationals ([`arith::Rational`]) or `f64` with an explicit
//! [`arith::ToleranceProfile`]. Negative verdicts are only ever reported as
//! proven when they were certified in exact arithmetic.

pub mod arith;
pub mod error;
pub mod go;
pub mod lie;
pub mod metric;
pub mod rep;
pub mod scenario;
pub mod subspace;

pub use error::{Error, Result};

#[cfg(test)]
pub(crate) mod testutil {
    use std::sync::Arc;

    use crate::arith::{Rational, ToleranceProfile};
    use crate::lie::{build_classical, Algebra, Family};

    pub fn so(n: usize) -> Arc<Algebra<Rational>> {
        Algebra::with_killing(format!("so({n})"), build_classical(Family::So, n).unwrap(), ToleranceProfile::default())
            .unwrap()
    }

    pub fn so_f64(n: usize) -> Arc<Algebra<f64>> {
        Algebra::with_killing(format!("so({n})"), build_classical(Family::So, n).unwrap(), ToleranceProfile::default())
            .unwrap()
    }
}
