use serde::Serialize;

use super::report::{parse_exact, Record, Report};
use super::run::Context;
use super::spec::{GridTuple, MetricSource};
use crate::arith::{ratio_to_f64, Backend, Rational};
use crate::error::{Error, Result};
use crate::go::{verify_certificate, verify_counterexample, Counterexample, GoCertificate};
use crate::metric::{isometry_subalgebra, MetricOperator};
use crate::subspace::Subspace;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReplayOutcome {
    pub certificates_checked: usize,
    pub certificates_failed: usize,
    pub counterexamples_checked: usize,
    pub counterexamples_failed: usize,
    /// Float failures that were never confirmed; nothing to replay.
    pub unconfirmed: usize,
}

impl ReplayOutcome {
    pub fn ok(&self) -> bool {
        self.certificates_failed == 0 && self.counterexamples_failed == 0
    }
}

/// Re-verifies every certificate and counterexample in a report from its
/// embedded spec alone. Counterexamples are always checked exactly.
pub fn replay(report: &Report) -> Result<ReplayOutcome> {
    let spec = &report.header.spec;
    if spec.hash() != report.header.spec_hash {
        return Err(Error::Replay("embedded spec does not match its hash".into()));
    }
    let exact = Context::<Rational>::build(spec)?;
    let float = match spec.backend {
        Backend::Float => Some(Context::<f64>::build(spec)?),
        Backend::Exact => None,
    };
    let mut out = ReplayOutcome::default();
    for rec in &report.records {
        match rec {
            Record::Go(g) => {
                let source = spec
                    .metric_source()
                    .ok_or_else(|| Error::Replay("go record without a single metric in the spec".into()))?;
                let (lambda, kp) = metric_and_isometry(&exact, &source)?;
                if let Some(c) = &g.counterexample {
                    if c.exact {
                        out.counterexamples_checked += 1;
                        let ce = Counterexample {
                            direction: parse_exact(&c.direction)?,
                            rank_a: c.rank_a,
                            rank_ab: c.rank_ab,
                            residual: f64::INFINITY,
                        };
                        out.counterexamples_failed += usize::from(!verify_counterexample(&lambda, &kp, &ce));
                    } else {
                        out.unconfirmed += 1;
                    }
                }
                if g.certificates.is_empty() {
                    continue;
                }
                match &float {
                    None => {
                        for c in &g.certificates {
                            out.certificates_checked += 1;
                            let cert = GoCertificate {
                                direction: parse_exact(&c.direction)?,
                                witness: parse_exact(&c.witness)?,
                                residual: c.residual,
                            };
                            out.certificates_failed += usize::from(!verify_certificate(&lambda, &kp, &cert));
                        }
                    }
                    Some(fctx) => {
                        let (flambda, fkp) = metric_and_isometry(fctx, &source)?;
                        for c in &g.certificates {
                            out.certificates_checked += 1;
                            let to_f = |v: &[String]| -> Result<Vec<f64>> {
                                Ok(parse_exact(v)?.iter().map(ratio_to_f64).collect())
                            };
                            let cert = GoCertificate {
                                direction: to_f(&c.direction)?,
                                witness: to_f(&c.witness)?,
                                residual: c.residual,
                            };
                            out.certificates_failed += usize::from(!verify_certificate(&flambda, &fkp, &cert));
                        }
                    }
                }
            }
            Record::SweepRow(row) => {
                let Some(c) = &row.counterexample else { continue };
                if !c.exact {
                    out.unconfirmed += 1;
                    continue;
                }
                let tuple = GridTuple {
                    variety: row.variety.clone(),
                    params: parse_exact(&row.params)?,
                    center: row.center.as_ref().map(|v| parse_exact(v)).transpose()?,
                };
                let (lambda, kp) = metric_and_isometry(&exact, &MetricSource::Tuple(tuple))?;
                out.counterexamples_checked += 1;
                let ce = Counterexample {
                    direction: parse_exact(&c.direction)?,
                    rank_a: c.rank_a,
                    rank_ab: c.rank_ab,
                    residual: f64::INFINITY,
                };
                out.counterexamples_failed += usize::from(!verify_counterexample(&lambda, &kp, &ce));
            }
            _ => {}
        }
    }
    Ok(out)
}

fn metric_and_isometry<S: crate::arith::Scalar>(
    ctx: &Context<S>,
    source: &MetricSource,
) -> Result<(MetricOperator<S>, Subspace<S>)> {
    let lambda = ctx.metric(source)?;
    let kp = isometry_subalgebra(&lambda)?;
    Ok((lambda, kp))
}
