use std::sync::Arc;

use super::report::{
    exact_strings, CertificateRecord, CounterexampleRecord, EquivarianceRecord, GoRecord, NatredRecord, Record,
    RegularityRecord, Report, SplitRecord, ValidateRecord, DISPROVED, NOT_DISPROVED, UNCONFIRMED,
};
use super::spec::{Check, GridTuple, MetricSource, ScenarioSpec};
use super::sweep::run_sweep;
use crate::arith::{format_rational_short, Backend, Matrix, Rational, Scalar};
use crate::error::{Error, Result};
use crate::go::{
    confirm_exact, go_verdict, natred_condition_check, normalizer_equivariance_check, split_check, GoOutcome,
    SamplingStrategy,
};
use crate::lie::{
    ad_invariance_violation, build_classical, embed_so_partition, killing_form, parse_structure_table,
    su_torus_layout, Algebra, EmbeddingLayout, Family, StructureAlgebra,
};
use crate::metric::{
    dazi_structure_check, equivariance_check, is_simple, isometry_subalgebra, layout_block_spec, metric_from_blocks,
    parse_block_spec, BlockSpec, MetricOperator,
};
use crate::rep::{criterion_weak_regularity, is_weakly_regular};
use crate::subspace::{is_regular, parse_subspace, Subspace};

/// Everything a spec resolves to on one backend.
pub struct Context<S> {
    pub algebra: Arc<Algebra<S>>,
    pub layout: Option<EmbeddingLayout<S>>,
    /// Layout pieces followed by the spec's own named subspaces.
    pub named: Vec<(String, Subspace<S>)>,
    pub subgroup: Option<Subspace<S>>,
}

pub fn structure_of<S: Scalar>(spec: &ScenarioSpec) -> Result<StructureAlgebra<S>> {
    match (&spec.algebra.family, spec.algebra.n, &spec.algebra.table) {
        (Some(f), Some(n), _) => build_classical(f.parse::<Family>()?, n),
        (_, _, Some(t)) => Ok(parse_structure_table(t)?.convert()),
        _ => Err(Error::Precondition("algebra spec is incomplete".into())),
    }
}

impl<S: Scalar> Context<S> {
    pub fn build(spec: &ScenarioSpec) -> Result<Self> {
        let algebra = Algebra::with_killing(spec.algebra_label(), structure_of(spec)?, spec.tolerance)?;
        let n = spec.algebra.n.unwrap_or(0);
        let layout = if let Some(p) = &spec.subgroup.partition {
            Some(embed_so_partition(&algebra, n, p)?)
        } else if spec.subgroup.torus {
            Some(su_torus_layout(&algebra, n)?)
        } else {
            None
        };
        let mut named = layout.as_ref().map(|l| l.named_subspaces()).unwrap_or_default();
        for (name, text) in &spec.subspaces {
            if named.iter().any(|(n, _)| n == name) {
                return Err(Error::Precondition(format!("subspace name `{name}` clashes with a layout block")));
            }
            let s = parse_subspace(text, &algebra)
                .map_err(|e| Error::Precondition(format!("subspace `{name}`: {e}")))?;
            named.push((name.clone(), s));
        }
        let subgroup = if let Some(l) = &layout {
            Some(l.k())
        } else if !spec.subgroup.spaces.is_empty() {
            let mut k = Subspace::zero(&algebra);
            for s in &spec.subgroup.spaces {
                let (_, space) = named.iter().find(|(n, _)| n == s).expect("validated");
                k = k.sum(space);
            }
            Some(k)
        } else {
            None
        };
        if let Some(k) = &subgroup {
            if let Some((i, j)) = k.subalgebra_violation() {
                return Err(Error::NotSubalgebra(i + 1, j + 1));
            }
        }
        Ok(Context {
            algebra,
            layout,
            named,
            subgroup,
        })
    }

    pub fn subgroup(&self) -> Result<&Subspace<S>> {
        self.subgroup
            .as_ref()
            .ok_or_else(|| Error::Precondition("this check needs a subgroup".into()))
    }

    fn layout(&self) -> Result<&EmbeddingLayout<S>> {
        self.layout
            .as_ref()
            .ok_or_else(|| Error::Precondition("parameters need a partition or torus layout".into()))
    }

    pub fn metric(&self, source: &MetricSource) -> Result<MetricOperator<S>> {
        let spec = match source {
            MetricSource::Params(p) => {
                let p: Vec<S> = p.iter().map(S::from_rational).collect();
                layout_block_spec(self.layout()?, &p)?
            }
            MetricSource::Blocks(text) => parse_block_spec(text, &self.named)?,
            MetricSource::Tuple(t) => self.tuple_blocks(t)?,
        };
        metric_from_blocks(&spec)
    }

    fn tuple_blocks(&self, t: &GridTuple) -> Result<BlockSpec<S>> {
        let layout = self.layout()?;
        let p: Vec<S> = t.params.iter().map(S::from_rational).collect();
        let Some(center) = &t.center else {
            return layout_block_spec(layout, &p);
        };
        let named = layout.named_subspaces();
        if named.len() != p.len() {
            return Err(Error::DimensionMismatch(format!(
                "layout has {} blocks, tuple has {} parameters",
                named.len(),
                p.len()
            )));
        }
        let (first_name, first) = named[0].clone();
        let d = first.dim();
        if center.len() != d * d {
            return Err(Error::DimensionMismatch(format!("centre Gram matrix needs {} entries", d * d)));
        }
        let gram = Matrix::from_fn(d, d, |i, j| S::from_rational(&center[i * d + j]));
        let scalars = named.into_iter().zip(p).skip(1).map(|((n, s), v)| (n, s, v)).collect();
        Ok(BlockSpec::scalars(scalars).with_center(first_name, first, gram))
    }
}

pub fn metric_label(source: &MetricSource) -> String {
    let list = |v: &[Rational]| v.iter().map(format_rational_short).collect::<Vec<_>>().join(", ");
    match source {
        MetricSource::Params(p) => format!("x = ({})", list(p)),
        MetricSource::Blocks(text) => {
            let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
            format!("blocks [{}]", lines.join("; "))
        }
        MetricSource::Tuple(t) => match &t.center {
            Some(c) => format!("x = ({}), centre Gram ({})", list(&t.params), list(c)),
            None => format!("x = ({})", list(&t.params)),
        },
    }
}

pub fn strategy_of(spec: &ScenarioSpec) -> SamplingStrategy {
    SamplingStrategy {
        seed: spec.seed,
        random_count: spec.samples,
        structured: true,
        basis_vectors: true,
    }
}

/// Runs the requested checks in dependency order.
pub fn run_check(spec: &ScenarioSpec) -> Result<Report> {
    spec.validate()?;
    let records = match spec.backend {
        Backend::Exact => run_records::<Rational>(spec)?,
        Backend::Float => run_records::<f64>(spec)?,
    };
    Ok(Report::new(spec, records))
}

fn run_records<S: Scalar>(spec: &ScenarioSpec) -> Result<Vec<Record>> {
    let checks = spec.resolved_checks();
    let mut records = Vec::new();
    if checks.contains(&Check::Validate) {
        records.push(Record::Validate(validate_record::<S>(spec)?));
    }
    let ctx = Context::<S>::build(spec)?;
    if checks.contains(&Check::Regularity) {
        records.push(Record::Regularity(regularity_record(ctx.subgroup()?, spec.seed)?));
    }
    if let Some(source) = spec.metric_source() {
        let needs_metric = checks
            .iter()
            .any(|c| matches!(c, Check::Equivariance | Check::Go | Check::Natred | Check::Split));
        if needs_metric {
            let label = metric_label(&source);
            let lambda = ctx.metric(&source)?;
            let kp = isometry_subalgebra(&lambda)?;
            let mut go = None;
            if checks.contains(&Check::Equivariance) {
                records.push(Record::Equivariance(equivariance_record(&lambda, ctx.subgroup()?, &kp, &label)?));
            }
            if checks.contains(&Check::Go) {
                let r = go_record(spec, &source, &lambda, &kp, &label)?;
                go = Some(r.verdict.clone());
                records.push(Record::Go(r));
            }
            if checks.contains(&Check::Natred) {
                let r = natred_record(&lambda, &kp, &label)?;
                assert_chain(&r, go.as_deref())?;
                records.push(Record::Natred(r));
            }
            if checks.contains(&Check::Split) {
                records.push(Record::Split(split_record(&lambda, &kp, &strategy_of(spec), &label)?));
            }
        }
    }
    if checks.contains(&Check::Sweep) {
        records.extend(run_sweep(spec, &ctx)?);
    }
    Ok(records)
}

/// Validity of the structure constants and of `Q = -B`. Failures are errors
/// carrying the offending basis indices.
pub fn validate_record<S: Scalar>(spec: &ScenarioSpec) -> Result<ValidateRecord> {
    let s: StructureAlgebra<S> = structure_of(spec)?;
    let tol = &spec.tolerance;
    s.check_antisymmetry(tol)?;
    s.check_jacobi(tol)?;
    let k = killing_form(&s, tol);
    if let Some((i, j, l)) = ad_invariance_violation(&s, &k.b, tol) {
        return Err(Error::Contract(format!(
            "Killing form fails ad-invariance at basis triple ({}, {}, {})",
            i + 1,
            j + 1,
            l + 1
        )));
    }
    Ok(ValidateRecord {
        algebra: spec.algebra_label(),
        dim: s.dim(),
        antisymmetry: true,
        jacobi: true,
        killing_ad_invariant: true,
        q_positive_definite: k.q_positive_definite,
    })
}

pub fn regularity_record<S: Scalar>(k: &Subspace<S>, seed: u64) -> Result<RegularityRecord> {
    let reg = is_regular(k, seed)?;
    if reg.maximal_rank && !reg.self_normalizing {
        return Err(Error::Contract("k has maximal rank but is not self-normalizing".into()));
    }
    let weak = is_weakly_regular(k)?;
    // Errors out if the sufficient condition holds without weak regularity.
    let hom_k_m_vanishes = criterion_weak_regularity(k)?;
    Ok(RegularityRecord {
        k_dim: k.dim(),
        regular: reg.regular,
        maximal_rank: reg.maximal_rank,
        rank_k: reg.rank_k,
        rank_normalizer: reg.rank_normalizer,
        rank_g: reg.rank_g,
        dim_normalizer: reg.dim_normalizer,
        dim_centralizer: reg.dim_centralizer,
        self_normalizing: reg.self_normalizing,
        weakly_regular: weak.weakly_regular,
        dim_p: weak.dim_p,
        intertwiner_dim: weak.intertwiner_dim,
        hom_k_m_vanishes,
    })
}

fn equivariance_record<S: Scalar>(
    lambda: &MetricOperator<S>,
    k: &Subspace<S>,
    kp: &Subspace<S>,
    label: &str,
) -> Result<EquivarianceRecord> {
    let rep = equivariance_check(lambda, k);
    let nrep = normalizer_equivariance_check(lambda, k)?;
    let k_in_isometry = kp.contains_subspace(k);
    if rep.holds && !k_in_isometry {
        return Err(Error::Contract(
            "metric is ad_k-equivariant but k is not inside its isometry subalgebra".into(),
        ));
    }
    Ok(EquivarianceRecord {
        metric: label.to_string(),
        holds: rep.holds,
        witness: rep.witness,
        normalizer_dim: nrep.normalizer_dim,
        normalizer_holds: nrep.holds,
        normalizer_witness: nrep.witness,
        k_semisimple: nrep.k_semisimple,
        k_self_normalizing: nrep.k_self_normalizing,
        k_in_isometry,
    })
}

pub(crate) fn counterexample_record(
    sample_index: usize,
    ce: &crate::go::Counterexample<Rational>,
) -> CounterexampleRecord {
    CounterexampleRecord {
        sample_index,
        direction: exact_strings(&ce.direction),
        rank_a: ce.rank_a,
        rank_ab: ce.rank_ab,
        exact: true,
    }
}

/// Verdict over `k'`, with float suspicions re-decided exactly.
pub(crate) fn decide_go<S: Scalar>(
    spec: &ScenarioSpec,
    source: &MetricSource,
    lambda: &MetricOperator<S>,
    kp: &Subspace<S>,
    strategy: &SamplingStrategy,
) -> Result<(String, crate::go::GoVerdict<S>, Option<CounterexampleRecord>)> {
    let v = go_verdict(lambda, kp, strategy)?;
    let (verdict, ce) = match &v.outcome {
        GoOutcome::NotDisproved { .. } => (NOT_DISPROVED.to_string(), None),
        GoOutcome::Disproved {
            sample_index,
            counterexample,
        } => {
            let exact: Vec<Rational> = counterexample.direction.iter().map(Scalar::to_rational).collect();
            let ce = crate::go::Counterexample {
                direction: exact,
                rank_a: counterexample.rank_a,
                rank_ab: counterexample.rank_ab,
                residual: counterexample.residual,
            };
            (DISPROVED.to_string(), Some(counterexample_record(*sample_index, &ce)))
        }
        GoOutcome::Suspected {
            sample_index,
            counterexample,
        } => {
            let ctx = Context::<Rational>::build(spec)?;
            let exact_lambda = ctx.metric(source)?;
            let exact_kp = isometry_subalgebra(&exact_lambda)?;
            let dir: Vec<f64> = counterexample.direction.iter().map(Scalar::to_f64).collect();
            match confirm_exact(&exact_lambda, &exact_kp, &dir)? {
                Some(ce) => (DISPROVED.to_string(), Some(counterexample_record(*sample_index, &ce))),
                None => (
                    UNCONFIRMED.to_string(),
                    Some(CounterexampleRecord {
                        sample_index: *sample_index,
                        direction: exact_strings(&counterexample.direction),
                        rank_a: counterexample.rank_a,
                        rank_ab: counterexample.rank_ab,
                        exact: false,
                    }),
                ),
            }
        }
    };
    Ok((verdict, v, ce))
}

fn go_record<S: Scalar>(
    spec: &ScenarioSpec,
    source: &MetricSource,
    lambda: &MetricOperator<S>,
    kp: &Subspace<S>,
    label: &str,
) -> Result<GoRecord> {
    let (verdict, v, counterexample) = decide_go(spec, source, lambda, kp, &strategy_of(spec))?;
    let (sample_count, strategy, certificates) = match v.outcome {
        GoOutcome::NotDisproved {
            sample_count,
            strategy,
            certificates,
        } => (
            sample_count,
            strategy,
            certificates
                .iter()
                .map(|c| CertificateRecord {
                    direction: exact_strings(&c.direction),
                    witness: exact_strings(&c.witness),
                    residual: c.residual,
                })
                .collect(),
        ),
        GoOutcome::Disproved { sample_index, .. } | GoOutcome::Suspected { sample_index, .. } => {
            (sample_index + 1, format!("seed={} stopped at first failure", spec.seed), Vec::new())
        }
    };
    Ok(GoRecord {
        metric: label.to_string(),
        k_dim: kp.dim(),
        verdict,
        sample_count,
        strategy,
        certificates,
        counterexample,
    })
}

pub(crate) fn natred_record<S: Scalar>(lambda: &MetricOperator<S>, kp: &Subspace<S>, label: &str) -> Result<NatredRecord> {
    let m = kp.orthogonal_complement();
    let cond = natred_condition_check(lambda, kp, &m)?;
    let mut r = NatredRecord {
        metric: label.to_string(),
        decided: false,
        naturally_reductive: false,
        form: None,
        isometry_dim: kp.dim(),
        center_dim: 0,
        ideal_dims: Vec::new(),
        ideal_scalars: Vec::new(),
        complement_scalar: None,
        reason: None,
        condition_holds: cond.holds,
        condition_witness: cond.witness,
    };
    if !is_simple(lambda.algebra())? {
        r.reason = Some("algebra is not simple".into());
        return Ok(r);
    }
    let d = dazi_structure_check(lambda)?;
    r.decided = true;
    r.naturally_reductive = d.verdict;
    r.center_dim = d.decomposition.center.dim();
    r.ideal_dims = d.decomposition.ideal_dims();
    r.ideal_scalars = exact_strings(&d.ideal_scalars);
    r.complement_scalar = d.complement_scalar.map(|c| exact_strings(&[c]).remove(0));
    r.reason = d.reason;
    if d.verdict {
        let bi_invariant = d.complement.is_zero();
        r.form = Some(if bi_invariant { "bi-invariant" } else { "dazi" }.into());
    }
    Ok(r)
}

/// Naturally reductive ⟹ trilinear condition ⟹ not disproved.
pub(crate) fn assert_chain(r: &NatredRecord, go: Option<&str>) -> Result<()> {
    if r.naturally_reductive && !r.condition_holds {
        return Err(Error::Contract(format!(
            "{}: D'Atri-Ziller form found but <[X, Y]_m, X> = 0 fails on the complement of k'",
            r.metric
        )));
    }
    if r.condition_holds && go == Some(DISPROVED) {
        return Err(Error::Contract(format!(
            "{}: trilinear condition holds but the g.o. verdict is disproved",
            r.metric
        )));
    }
    Ok(())
}

pub(crate) fn split_record<S: Scalar>(
    lambda: &MetricOperator<S>,
    kp: &Subspace<S>,
    strategy: &SamplingStrategy,
    label: &str,
) -> Result<SplitRecord> {
    let s = split_check(lambda, kp, strategy)?;
    Ok(SplitRecord {
        metric: label.to_string(),
        k_dim: kp.dim(),
        weakly_regular: s.weakly_regular,
        k_semisimple: s.k_semisimple,
        k_self_normalizing: s.k_self_normalizing,
        applicable: s.applicable,
        preserves_k: s.preserves_k,
        preserves_m: s.preserves_m,
        bi_invariant_on_k: s.bi_invariant_on_k,
        coset_verdict: s.coset_verdict.as_ref().map(|v| v.label().to_string()),
        form_disagreements: s.form_disagreements,
        holds: s.holds,
    })
}
