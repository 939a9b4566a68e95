use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Thresholds used by the floating-point backend. The exact backend ignores them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceProfile {
    /// Singular values below `rank_epsilon * sigma_max` count as zero.
    pub rank_epsilon: f64,
    /// Max-norm residual above which a least-squares solution is rejected.
    pub residual_epsilon: f64,
    /// Eigenvalues closer than this (relative to the spectral radius) are merged.
    pub eigen_gap_epsilon: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile {
            rank_epsilon: 1e-9,
            residual_epsilon: 1e-8,
            eigen_gap_epsilon: 1e-7,
        }
    }
}

impl ToleranceProfile {
    pub fn new(rank_epsilon: f64, residual_epsilon: f64, eigen_gap_epsilon: f64) -> Result<Self> {
        let t = ToleranceProfile {
            rank_epsilon,
            residual_epsilon,
            eigen_gap_epsilon,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_epsilon", self.rank_epsilon),
            ("residual_epsilon", self.residual_epsilon),
            ("eigen_gap_epsilon", self.eigen_gap_epsilon),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Tolerance(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_positive() {
        assert!(ToleranceProfile::default().validate().is_ok());
    }

    #[test]
    fn rejects_non_positive() {
        assert!(ToleranceProfile::new(0.0, 1e-8, 1e-7).is_err());
        assert!(ToleranceProfile::new(1e-9, -1.0, 1e-7).is_err());
        assert!(ToleranceProfile::new(1e-9, 1e-8, f64::NAN).is_err());
    }
}
