//! Geodesic-orbit decisions and the related structural checks.

mod checks;
mod solve;
mod verdict;

pub use checks::{
    natred_condition_check, normalizer_equivariance_check, split_check, two_step_identity_check, NatredReport,
    NormalizerEquivarianceReport, SplitReport, TwoStepReport,
};
pub use solve::{go_solve_at, verify_certificate, verify_counterexample, Counterexample, GoCertificate, GoSolve};
pub use verdict::{confirm_exact, go_verdict, go_verdict_on, sample_directions, GoOutcome, GoVerdict, SamplingStrategy};
